class PlotkitError(Exception):
    """Base class for figure-regeneration errors."""


class SchemaMismatch(PlotkitError):
    """Input CSV or figure spec does not match the v1 sweep contract.

    The message carries the column/curve diff.
    """
