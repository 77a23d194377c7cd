"""Declarative figure specifications.

A spec is a small INI-style text file: one ``[figure]`` section with
global options, plus one ``[panel:<name>]`` section per panel (a single
``csv`` key inside ``[figure]`` is shorthand for a one-panel figure).

    [figure]
    outputs = fig1.png, fig1.svg
    scale = loglog
    curves = numeric, leading, upper, jansen
    markers = T_val, eps_tilde

    [panel:p1]
    csv = sweep_p1.csv
    title = first cancelation order

Recognized curves: numeric, leading, upper, lower, jansen, roland.
``clamp_oscillating_above = <T>`` drops the oscillating curves
(numeric, leading) past that run time while the bounds continue.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass

from .errors import SchemaMismatch

KNOWN_CURVES = ("numeric", "leading", "upper", "lower", "jansen", "roland")
KNOWN_MARKERS = ("T_val", "eps_tilde")
KNOWN_SCALES = ("loglog", "semilogx", "semilogy", "linear")


@dataclass(frozen=True)
class CurveSelection:
    curves: tuple
    markers: tuple

    def __post_init__(self):
        if not self.curves:
            raise SchemaMismatch(
                f"no curves selected; pick from {', '.join(KNOWN_CURVES)}"
            )
        unknown = [c for c in self.curves if c not in KNOWN_CURVES]
        if unknown:
            raise SchemaMismatch(
                f"unknown curves {unknown}; known: {list(KNOWN_CURVES)}"
            )
        bad_markers = [m for m in self.markers if m not in KNOWN_MARKERS]
        if bad_markers:
            raise SchemaMismatch(
                f"unknown markers {bad_markers}; known: {list(KNOWN_MARKERS)}"
            )


@dataclass(frozen=True)
class PanelSpec:
    csv_path: str
    selection: CurveSelection
    title: str = ""
    clamp_oscillating_above: float | None = None


@dataclass(frozen=True)
class FigureSpec:
    panels: tuple
    outputs: tuple
    scale: str = "loglog"
    title: str = ""

    def __post_init__(self):
        if not self.panels:
            raise SchemaMismatch("figure spec has no panels")
        if not self.outputs:
            raise SchemaMismatch("figure spec names no output file")
        if self.scale not in KNOWN_SCALES:
            raise SchemaMismatch(
                f"unknown scale {self.scale!r}; known: {list(KNOWN_SCALES)}"
            )


def _split(raw: str) -> tuple:
    return tuple(tok.strip() for tok in raw.split(",") if tok.strip())


def load_spec(path: str) -> FigureSpec:
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if not parser.read(path):
        raise SchemaMismatch(f"cannot read spec file {path!r}")
    if not parser.has_section("figure"):
        raise SchemaMismatch("spec is missing the [figure] section")
    fig = parser["figure"]

    default_curves = _split(fig.get("curves", ""))
    default_markers = _split(fig.get("markers", ""))

    def panel_from(section, fallback_title=""):
        curves = _split(section.get("curves", "")) or default_curves
        markers = _split(section.get("markers", "")) or default_markers
        clamp = section.get("clamp_oscillating_above", fig.get("clamp_oscillating_above"))
        return PanelSpec(
            csv_path=section.get("csv", ""),
            selection=CurveSelection(curves=curves, markers=markers),
            title=section.get("title", fallback_title),
            clamp_oscillating_above=float(clamp) if clamp else None,
        )

    panels = []
    for name in parser.sections():
        if name.startswith("panel:"):
            panel = panel_from(parser[name], fallback_title=name.split(":", 1)[1])
            if not panel.csv_path:
                raise SchemaMismatch(f"[{name}] is missing the csv key")
            panels.append(panel)
    if not panels:
        if not fig.get("csv"):
            raise SchemaMismatch("spec needs a csv key or [panel:*] sections")
        panels.append(panel_from(fig))

    return FigureSpec(
        panels=tuple(panels),
        outputs=_split(fig.get("outputs", fig.get("output", ""))),
        scale=fig.get("scale", "loglog"),
        title=fig.get("title", ""),
    )
