"""Closed-form reference values for small n, d in the uniform ball, sphere and half-sphere.

Each entry is stored as a list of ``(Fraction, k)`` terms meaning
``sum of coefficient * pi**k``, so comparisons run at full double precision
instead of against transcribed decimals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator

from .betadist import Model, beta_model, sphere_model
from .expectations import (
    ExactValue,
    FunctionalKind,
    FunctionalSpec,
    PolytopeKind,
    evaluate,
    halfsphere_expected_facets,
)

__all__ = [
    "Cell",
    "TABLES",
    "TABLE_TITLES",
    "closed_form",
    "all_cells",
    "CellCheck",
    "check_cell",
    "SPHERE3_LAWS",
    "sphere3_law_cells",
]

Terms = tuple[tuple[Fraction, int], ...]


def _t(*terms: tuple[int, int, int]) -> Terms:
    """Terms given as (numerator, denominator, power of pi)."""
    return tuple((Fraction(num, den), k) for num, den, k in terms)


def closed_form(terms: Terms) -> float:
    return math.fsum(float(c) * math.pi ** k for c, k in terms)


def format_terms(terms: Terms) -> str:
    out = []
    for c, k in terms:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        num = f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
        if k == 0:
            body = num
        elif k > 0:
            body = f"{num}*pi" + (f"^{k}" if k != 1 else "")
        else:
            body = f"{num}/pi" + (f"^{-k}" if k != -1 else "")
        out.append(f"{sign} {body}")
    s = " ".join(out)
    return s[2:] if s.startswith("+ ") else s


@dataclass(frozen=True)
class Cell:
    table: int
    column: str
    n: int
    terms: Terms
    compute: Callable[[], ExactValue]

    @property
    def name(self) -> str:
        return f"T{self.table}[{self.column}, n={self.n}]"

    @property
    def expected(self) -> float:
        return closed_form(self.terms)


TABLE_TITLES = {
    1: "uniform disc: mean area and perimeter",
    2: "unit circle: mean area and perimeter",
    3: "uniform 3-ball: mean volume, surface area and mean width",
    4: "unit 2-sphere: mean volume, surface area and mean width",
    5: "mean number of edges and facets, ball and sphere",
    6: "upper half-sphere: mean number of spherical facets",
}

P, S = PolytopeKind.P, PolytopeKind.S
_VOL = FunctionalSpec(FunctionalKind.VOLUME)
_SURF = FunctionalSpec(FunctionalKind.SURFACE_AREA)
_MW = FunctionalSpec(FunctionalKind.MEAN_WIDTH)
_FAC = FunctionalSpec(FunctionalKind.FACET_COUNT)


def _ev(spec: FunctionalSpec, model: Model, kind: PolytopeKind, n: int) -> Callable[[], ExactValue]:
    return lambda: evaluate(spec, model, kind, n)


def _hs(n: int, d: int) -> Callable[[], ExactValue]:
    return lambda: ExactValue(halfsphere_expected_facets(n, d, 0.0), 0.0)


# column label -> (functional, model, kind) per table
_COLUMNS_2D = lambda m: {  # noqa: E731
    "Vol2(P)": (_VOL, m, P),
    "Vol2(S)": (_VOL, m, S),
    "S1(P)": (_SURF, m, P),
    "S1(S)": (_SURF, m, S),
}
_COLUMNS_3D = lambda m: {  # noqa: E731
    "V3(P)": (_VOL, m, P),
    "V3(S)": (_VOL, m, S),
    "S2(P)": (_SURF, m, P),
    "S2(S)": (_SURF, m, S),
    "mw3(P)": (_MW, m, P),
    "mw3(S)": (_MW, m, S),
}

_ENTRIES: dict[int, dict[int, list[Terms]]] = {
    1: {
        3: [_t((35, 48, -1)), _t((35, 12, -1)), _t((128, 15, -1)), _t((512, 15, -1), (-104704, 1575, -2))],
        4: [
            _t((35, 24, -1)),
            _t((35, 6, -1), (-2816, 135, -3)),
            _t((256, 15, -1), (-11075584, 165375, -3)),
            _t((1024, 15, -1), (-88604672, 165375, -3)),
        ],
        5: [
            _t((175, 72, -1), (-23023, 6912, -3)),
            _t((175, 18, -1), (-23023, 432, -3)),
            _t((256, 9, -1), (-5537792, 33075, -3)),
            _t((1024, 9, -1), (-88604672, 33075, -3), (204130238464, 38201625, -4)),
        ],
    },
    2: {
        3: [_t((3, 2, -1)), _t((6, 1, -1)), _t((12, 1, -1)), _t((48, 1, -1), (-96, 1, -2))],
        4: [_t((3, 1, -1)), _t((12, 1, -1), (-48, 1, -3)), _t((24, 1, -1), (-96, 1, -3)), _t((96, 1, -1), (-768, 1, -3))],
        5: [
            _t((5, 1, -1), (-15, 2, -3)),
            _t((20, 1, -1), (-120, 1, -3)),
            _t((40, 1, -1), (-240, 1, -3)),
            _t((160, 1, -1), (-3840, 1, -3), (7680, 1, -4)),
        ],
    },
    3: {
        4: [_t((12, 715, 1)), _t((96, 715, 1)), _t((36, 77, 1)), _t((135, 112, 1)), _t((666, 715, 0)), _t((6408, 5005, 0))],
        5: [_t((6, 143, 1)), _t((195, 1024, 1)), _t((11448, 17017, 1)), _t((24048, 17017, 1)), _t((1044, 1001, 0)), _t((2421, 1792, 0))],
        6: [
            _t((2070, 29393, 1)), _t((77472, 323323, 1)), _t((1314, 1547, 1)),
            _t((5661, 3584, 1)), _t((33102, 29393, 0)), _t((454140, 323323, 0)),
        ],
    },
    4: {
        4: [_t((4, 105, 1)), _t((32, 105, 1)), _t((4, 5, 1)), _t((2, 1, 1)), _t((6, 5, 0)), _t((8, 5, 0))],
        5: [_t((2, 21, 1)), _t((5, 12, 1)), _t((8, 7, 1)), _t((16, 7, 1)), _t((4, 3, 0)), _t((5, 3, 0))],
        6: [_t((10, 63, 1)), _t((32, 63, 1)), _t((10, 7, 1)), _t((5, 2, 1)), _t((10, 7, 0)), _t((12, 7, 0))],
    },
}

# Table 5 columns: ball d=2 P/S edges, ball d=3 P/S facets, sphere d=3 P/S facets.
_T5_COLUMNS = [
    ("f1(P,d2,ball)", beta_model(2, 0.0), P),
    ("f1(S,d2,ball)", beta_model(2, 0.0), S),
    ("f2(P,d3,ball)", beta_model(3, 0.0), P),
    ("f2(S,d3,ball)", beta_model(3, 0.0), S),
    ("f2(P,d3,sphere)", sphere_model(3), P),
    ("f2(S,d3,sphere)", sphere_model(3), S),
]
_T5 = {
    3: [_t((3, 1, 0)), _t((6, 1, 0), (-32, 3, -2)), None, _t((8, 1, 0)), None, _t((8, 1, 0))],
    4: [_t((4, 1, 0), (-35, 12, -2)), _t((8, 1, 0), (-70, 3, -2)), _t((4, 1, 0)), _t((357, 32, 0)), _t((4, 1, 0)), _t((12, 1, 0))],
    5: [
        _t((5, 1, 0), (-175, 24, -2)),
        _t((10, 1, 0), (-175, 3, -2), (5632, 27, -4)),
        _t((840, 143, 0)), _t((2000, 143, 0)), _t((6, 1, 0)), _t((16, 1, 0)),
    ],
    6: [
        _t((6, 1, 0), (-175, 12, -2), (23023, 1152, -4)),
        _t((12, 1, 0), (-350, 3, -2), (23023, 36, -4)),
        _t((1090, 143, 0)), _t((8485, 512, 0)), _t((8, 1, 0)), _t((20, 1, 0)),
    ],
}

# Table 6 columns: d = 2, 3, 4.
_T6 = {
    3: [_t((3, 1, 0)), None, None],
    4: [_t((6, 1, 0), (-24, 1, -2)), _t((4, 1, 0)), None],
    5: [_t((10, 1, 0), (-60, 1, -2)), _t((20, 3, 0), (-10, 1, -2)), _t((5, 1, 0))],
    6: [_t((15, 1, 0), (-180, 1, -2), (720, 1, -4)), _t((10, 1, 0), (-30, 1, -2)), _t((15, 1, 0), (-200, 3, -2))],
    7: [_t((21, 1, 0), (-420, 1, -2), (2520, 1, -4)), _t((14, 1, 0), (-70, 1, -2), (105, 1, -4)), _t((35, 1, 0), (-700, 3, -2))],
    8: [
        _t((28, 1, 0), (-840, 1, -2), (10080, 1, -4), (-40320, 1, -6)),
        _t((56, 3, 0), (-140, 1, -2), (420, 1, -4)),
        _t((70, 1, 0), (-2800, 3, -2), (101920, 27, -4)),
    ],
}


def _build() -> dict[int, list[Cell]]:
    tables: dict[int, list[Cell]] = {}
    models = {1: beta_model(2, 0.0), 2: sphere_model(2), 3: beta_model(3, 0.0), 4: sphere_model(3)}
    for t in (1, 2, 3, 4):
        cols = (_COLUMNS_2D if t <= 2 else _COLUMNS_3D)(models[t])
        cells = []
        for n, row in _ENTRIES[t].items():
            for (label, (spec, model, kind)), terms in zip(cols.items(), row):
                cells.append(Cell(t, label, n, terms, _ev(spec, model, kind, n)))
        tables[t] = cells
    cells = []
    for n, row in _T5.items():
        for (label, model, kind), terms in zip(_T5_COLUMNS, row):
            if terms is not None:
                cells.append(Cell(5, label, n, terms, _ev(_FAC, model, kind, n)))
    tables[5] = cells
    cells = []
    for n, row in _T6.items():
        for d, terms in zip((2, 3, 4), row):
            if terms is not None:
                cells.append(Cell(6, f"f{d - 1}(halfsphere,d{d})", n, terms, _hs(n, d)))
    tables[6] = cells
    return tables


TABLES: dict[int, list[Cell]] = _build()


def all_cells() -> Iterator[Cell]:
    for t in sorted(TABLES):
        yield from TABLES[t]


@dataclass(frozen=True)
class CellCheck:
    cell: Cell
    computed: float
    expected: float
    rel_error: float
    passed: bool


def check_cell(cell: Cell, rtol: float = 1e-9) -> CellCheck:
    got = cell.compute().value
    want = cell.expected
    rel = abs(got - want) / abs(want)
    return CellCheck(cell, got, want, rel, rel <= rtol)


# Expected volume, surface area and mean width of uniform-sphere polytopes in R^3, any n >= 4.
SPHERE3_LAWS: dict[str, tuple[FunctionalSpec, PolytopeKind, Callable[[int], float]]] = {
    "V3(P)": (_VOL, P, lambda n: 4 * math.pi / 3 * (n - 1) * (n - 2) * (n - 3) / ((n + 1) * (n + 2) * (n + 3))),
    "V3(S)": (_VOL, S, lambda n: 4 * math.pi / 3 * n * (n - 2) / ((n + 1) * (n + 3))),
    "S2(P)": (_SURF, P, lambda n: 4 * math.pi * (n - 1) * (n - 2) / ((n + 1) * (n + 2))),
    "S2(S)": (_SURF, S, lambda n: 4 * math.pi * (n - 1) / (n + 2)),
    "mw3(P)": (_MW, P, lambda n: 2 * (n - 1) / (n + 1)),
    "mw3(S)": (_MW, S, lambda n: 2 * n / (n + 1)),
}


def sphere3_law_cells(n_max: int = 50) -> Iterator[tuple[str, int, float, Callable[[], ExactValue]]]:
    """(label, n, closed form, quadrature thunk) for 4 <= n <= n_max."""
    model = sphere_model(3)
    for label, (spec, kind, law) in SPHERE3_LAWS.items():
        for n in range(4, n_max + 1):
            yield label, n, law(n), _ev(spec, model, kind, n)
