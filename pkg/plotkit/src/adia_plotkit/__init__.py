"""Figure regeneration from adia-tradeoff v1 sweep CSV files."""
from .errors import PlotkitError, SchemaMismatch
from .spec import CurveSelection, FigureSpec, PanelSpec, load_spec
from .render import read_sweep_csv, render

__version__ = "0.1.0"
