"""Bundled PD codes for the test diagrams."""

from importlib.resources import files

from ..diagram import LinkDiagram, parse_pd

NAMES = (
    "unknot",
    "trefoil_right",
    "trefoil_left",
    "figure_eight",
    "hopf_positive",
    "hopf_negative",
    "torus_2_5",
    "torus_3_4",
    "unlink2",
)

ALIASES = {
    "trefoil": "trefoil_right",
    "right_trefoil": "trefoil_right",
    "left_trefoil": "trefoil_left",
    "figure8": "figure_eight",
    "hopf": "hopf_positive",
    "t25": "torus_2_5",
    "t34": "torus_3_4",
    "unlink": "unlink2",
}

KNOTS = ("unknot", "trefoil_right", "trefoil_left", "figure_eight", "torus_2_5", "torus_3_4")


def pd_text(name: str) -> str:
    name = ALIASES.get(name, name)
    if name not in NAMES:
        raise KeyError(name)
    return files(__package__).joinpath(f"{name}.pd").read_text().strip()


def load(name: str) -> LinkDiagram:
    return parse_pd(pd_text(name))


def all_diagrams(max_crossings: int | None = None) -> dict:
    out = {}
    for name in NAMES:
        d = load(name)
        if max_crossings is None or d.n <= max_crossings:
            out[name] = d
    return out
