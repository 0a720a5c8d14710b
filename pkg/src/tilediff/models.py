"""Built-in tiling models and displacement-matrix ingestion.

A :class:`ModelSpec` packages one inflation tiling system: its number
field, the return-module generators (whose Minkowski lifts span the
cut-and-project lattice), the expansion map, the set-valued displacement
matrix, density metadata, and the catalog of deformations.  Four models
ship with the library:

``silver``          binary chain with intervals of length sqrt2 and 1
``silver_twisted``  same return module, reordered inflation; windows are
                    Cantorvals instead of intervals
``cap``             24 prototiles (4 shapes x 6 orientations); the
                    self-similar companion of the Hat family
``casper_scaffold`` the Spectre companion; ships without displacement
                    data, which must be loaded from a JSON file

Displacement translations are exact field elements in physical
coordinates.  The CAP displacement data is stored as packaged JSON in
``data/cap_displacement.json`` and validated by the exact sixfold
conjugation identity (see :func:`validate_symmetry`), which pinpoints any
corrupted entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property, lru_cache
from importlib import resources

import numpy as np

from .algebra import (CAP, FIELDS, SILVER, SPECTRE, AlgebraicElement,
                      FieldSpec, Surd)
from .cps import LatticeBasis

__all__ = [
    "DisplacementMatrix", "DeformationMap", "ModelSpec", "ModelDataError",
    "builtin", "builtin_names", "load_displacement", "save_displacement",
    "validate_symmetry", "SymmetryReport",
]

BUILTIN_NAMES = ("silver", "silver_twisted", "cap", "casper_scaffold")


class ModelDataError(ValueError):
    """Raised for malformed or inconsistent displacement data."""


class DisplacementMatrix:
    """Set-valued displacement matrix; entry (i, j) lists the translations
    of type-i tiles inside an inflated type-j tile."""

    def __init__(self, field: FieldSpec, entries):
        self.field = field
        self.entries = tuple(tuple(tuple(cell) for cell in row) for row in entries)
        self.n = len(self.entries)
        for row in self.entries:
            if len(row) != self.n:
                raise ModelDataError("displacement matrix must be square")
            for cell in row:
                for t in cell:
                    if t.field is not field:
                        raise ModelDataError("translation from wrong field")

    def card_matrix(self) -> np.ndarray:
        return np.array([[len(cell) for cell in row] for row in self.entries],
                        dtype=np.int64)

    def iter_translations(self):
        for i, row in enumerate(self.entries):
            for j, cell in enumerate(row):
                for t in cell:
                    yield i, j, t

    def __eq__(self, other):
        if not isinstance(other, DisplacementMatrix):
            return NotImplemented
        if self.n != other.n or self.field is not other.field:
            return False
        for r1, r2 in zip(self.entries, other.entries):
            for c1, c2 in zip(r1, r2):
                if {t.coords for t in c1} != {t.coords for t in c2}:
                    return False
        return True


@dataclass(frozen=True)
class DeformationMap:
    """Linear map from internal to physical space, with exact entries.

    ``periods`` lists field elements whose physical projections are
    translation periods of the deformed diffraction intensity (present
    for the lattice-projecting deformations).  ``image_lattice`` lists
    generators of the discrete lattice containing every deformed cocycle
    argument k_int - D^T k_phys, when documented.
    """

    name: str
    rows: tuple
    periods: tuple = ()
    image_lattice: tuple = ()

    @cached_property
    def matrix(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.rows])

    @property
    def dim(self) -> int:
        return len(self.rows)


class ModelSpec:
    """One tiling system; immutable after construction."""

    def __init__(self, name, field, tile_labels, generators, expansion,
                 antilinear, pf_eigenvalue, displacement, density_sq,
                 window_volume, fourier_module_doc, deformations,
                 orientations=None, internal_cutoff=3.0, default_iters=15,
                 return_module_doc=""):
        self.name = name
        self.field: FieldSpec = field
        self.tile_labels = tuple(tile_labels)
        self.generators = tuple(generators)
        self.expansion: AlgebraicElement = expansion
        self.antilinear = bool(antilinear)
        self.pf_eigenvalue: AlgebraicElement = pf_eigenvalue
        self.displacement: DisplacementMatrix | None = displacement
        self.density_sq: AlgebraicElement = density_sq
        self.window_volume: Surd | None = window_volume
        self.fourier_module_doc = fourier_module_doc
        self.return_module_doc = return_module_doc
        self.deformations = dict(deformations)
        self.orientations = orientations
        self.internal_cutoff = float(internal_cutoff)
        self.default_iters = int(default_iters)
        if displacement is not None and displacement.n != len(self.tile_labels):
            raise ModelDataError("displacement size does not match tile count")

    # -- derived data ----------------------------------------------------------

    @property
    def n_tiles(self) -> int:
        return len(self.tile_labels)

    @property
    def dim(self) -> int:
        return self.field.dim

    @property
    def has_displacement(self) -> bool:
        return self.displacement is not None

    @cached_property
    def lattice(self) -> LatticeBasis:
        return LatticeBasis(self.generators)

    @cached_property
    def contraction(self) -> AlgebraicElement:
        """Star image of the expansion; the internal IFS multiplier."""
        return self.expansion.star()

    @cached_property
    def density(self) -> float:
        """Control-point density (metadata, from the exact square)."""
        return float(np.sqrt(self.density_sq.embed_phys()[0]))

    def _scalar_matrix(self, elem: AlgebraicElement) -> np.ndarray:
        """Matrix of x -> elem*x (or elem*conj(x) if antilinear) on R^dim."""
        v = elem.embed_phys()
        if self.dim == 1:
            return np.array([[v[0]]])
        a, b = v
        if self.antilinear:
            return np.array([[a, b], [b, -a]])
        return np.array([[a, -b], [b, a]])

    @cached_property
    def phys_expansion_matrix(self) -> np.ndarray:
        return self._scalar_matrix(self.expansion)

    @cached_property
    def int_contraction_matrix(self) -> np.ndarray:
        return self._scalar_matrix(self.contraction)

    def apply_expansion(self, x: AlgebraicElement) -> AlgebraicElement:
        """Inflation map on exact physical coordinates."""
        if self.antilinear:
            return self.expansion * x.conj()
        return self.expansion * x

    def apply_contraction_star(self, y: AlgebraicElement) -> AlgebraicElement:
        """Internal IFS linear part on exact star coordinates."""
        if self.antilinear:
            return self.contraction * y.conj()
        return self.contraction * y

    def require_displacement(self) -> DisplacementMatrix:
        if self.displacement is None:
            raise ModelDataError(
                f"model {self.name!r} has no displacement data loaded")
        return self.displacement

    def with_displacement(self, disp: DisplacementMatrix,
                          pf_tol: float = 1e-9) -> "ModelSpec":
        """Attach validated displacement data; returns a new model.

        Checks field identity, return-module membership of every
        translation, and that the cardinality matrix is primitive with
        the documented Perron-Frobenius eigenvalue.
        """
        if disp.field is not self.field:
            raise ModelDataError("displacement data for a different field")
        if self.displacement is not None and disp.n != self.n_tiles:
            raise ModelDataError(
                f"expected {self.n_tiles} tile types, file has {disp.n}")
        lat = self.lattice
        for i, j, t in disp.iter_translations():
            if not lat.contains(t):
                raise ModelDataError(
                    f"translation at entry ({i},{j}) outside the return module: {t}")
        M = disp.card_matrix()
        _require_primitive(M)
        lam = float(np.max(np.abs(np.linalg.eigvals(M.astype(float)))))
        lam_doc = float(self.pf_eigenvalue.embed_phys()[0])
        if abs(lam - lam_doc) > pf_tol:
            raise ModelDataError(
                f"cardinality matrix PF eigenvalue {lam:.12g} does not match "
                f"documented {lam_doc:.12g}")
        labels = self.tile_labels
        if disp.n != len(labels):
            labels = tuple(f"t{i:02d}" for i in range(disp.n))
        return ModelSpec(
            self.name, self.field, labels, self.generators, self.expansion,
            self.antilinear, self.pf_eigenvalue, disp, self.density_sq,
            self.window_volume, self.fourier_module_doc, self.deformations,
            self.orientations, self.internal_cutoff, self.default_iters,
            self.return_module_doc)

    def __repr__(self):
        data = "loaded" if self.has_displacement else "none"
        return (f"ModelSpec({self.name!r}, tiles={self.n_tiles}, "
                f"field={self.field.name!r}, displacement={data})")


def _require_primitive(M: np.ndarray) -> None:
    n = M.shape[0]
    if np.any(M < 0):
        raise ModelDataError("cardinality matrix has negative entries")
    P = np.eye(n, dtype=object)
    A = M.astype(object)
    acc = A
    for _ in range(2 * n):
        if np.all(np.array([[x > 0 for x in row] for row in acc])):
            return
        acc = acc @ A
    raise ModelDataError("substitution matrix is not primitive")


# ---------------------------------------------------------------------------
# Displacement file I/O
#
# Schema: {"field": "silver"|"cap"|"spectre", "n": int,
#          "entries": [[[ [num,den], ... (degree pairs) ], ...], ...]}
# entries[i][j] is the list of translations of entry (i, j); each
# translation is a list of exact [numerator, denominator] pairs over the
# documented field basis.

def displacement_to_dict(disp: DisplacementMatrix) -> dict:
    return {
        "field": disp.field.name,
        "n": disp.n,
        "entries": [[[ [[c.numerator, c.denominator] for c in t.coords]
                       for t in cell] for cell in row] for row in disp.entries],
    }


def save_displacement(disp: DisplacementMatrix, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(displacement_to_dict(disp), fh, separators=(",", ":"))
        fh.write("\n")


def displacement_from_dict(data: dict) -> DisplacementMatrix:
    try:
        fname = data["field"]
        n = data["n"]
        raw = data["entries"]
    except (KeyError, TypeError) as exc:
        raise ModelDataError(f"missing displacement key: {exc}") from exc
    if fname not in FIELDS:
        raise ModelDataError(f"unknown field {fname!r}")
    field = FIELDS[fname]
    if not isinstance(n, int) or n <= 0:
        raise ModelDataError("n must be a positive integer")
    if len(raw) != n or any(len(row) != n for row in raw):
        raise ModelDataError(f"entries must form an {n}x{n} matrix")
    entries = []
    for row in raw:
        out_row = []
        for cell in row:
            stars = []
            for vec in cell:
                if len(vec) != field.degree:
                    raise ModelDataError(
                        f"translation needs {field.degree} coordinates")
                coords = []
                for pair in vec:
                    num, den = int(pair[0]), int(pair[1])
                    if den <= 0:
                        raise ModelDataError("denominator must be positive")
                    coords.append(Fraction(num, den))
                stars.append(field.element(coords))
            out_row.append(tuple(stars))
        entries.append(tuple(out_row))
    return DisplacementMatrix(field, entries)


def load_displacement(path) -> DisplacementMatrix:
    """Parse and structurally validate a displacement JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ModelDataError(f"invalid JSON: {exc}") from exc
    return displacement_from_dict(data)


@lru_cache(maxsize=None)
def _cap_displacement() -> DisplacementMatrix:
    ref = resources.files("tilediff").joinpath("data/cap_displacement.json")
    with ref.open("r", encoding="utf-8") as fh:
        return displacement_from_dict(json.load(fh))


# ---------------------------------------------------------------------------
# Built-in models

def _el(field, *coords):
    return field.element(coords)


def _silver_common():
    one = SILVER.one()
    s2 = SILVER.gen("sqrt2")
    lam = one + s2
    equal_lengths = DeformationMap(
        name="equal-lengths",
        rows=((Surd({1: 3, 2: -2}),),),
        periods=(_el(SILVER, Fraction(1, 2), Fraction(1, 4)),),
        image_lattice=(one - s2,),
    )
    return dict(
        field=SILVER,
        tile_labels=("a", "b"),
        generators=(one, s2),
        expansion=lam,
        antilinear=False,
        pf_eigenvalue=lam,
        density_sq=_el(SILVER, Fraction(3, 8), Fraction(1, 4)),
        window_volume=Surd({1: 1, 2: 1}),
        fourier_module_doc="sqrt2/4 * Z[sqrt2]",
        return_module_doc="Z[sqrt2]",
        deformations={"equal-lengths": equal_lengths},
        orientations=None,
        internal_cutoff=30.0,
        default_iters=20,
    )


def _silver_displacement(twisted: bool) -> DisplacementMatrix:
    z = SILVER.zero()
    one = SILVER.one()
    s2 = SILVER.gen("sqrt2")
    if twisted:
        entries = [[(one + one,), (z,)], [(z, one), (s2,)]]
    else:
        entries = [[(z,), (z,)], [(s2, one + s2), (s2,)]]
    return DisplacementMatrix(SILVER, entries)


def _build_silver_model(twisted: bool) -> ModelSpec:
    kw = _silver_common()
    return ModelSpec(
        name="silver_twisted" if twisted else "silver",
        displacement=_silver_displacement(twisted), **kw)


def _build_cap_model() -> ModelSpec:
    tau = CAP.gen("tau")
    xi = CAP.gen("xi")
    u1 = _el(CAP, 2, 3, -1, 0)
    u2 = _el(CAP, 1, 2, 1, -1)
    u3 = xi * u1
    u4 = xi * u2
    q = (tau - 2 + 3 * xi) / 12
    i15 = (2 * tau - 1) * (2 * xi - 1)           # i*sqrt15, star-fixed
    p_hat = (1 + xi) * (tau - xi) ** 3 * i15 / 45
    hat = DeformationMap(
        name="hat",
        rows=(
            (Surd({1: Fraction(-11, 16)}), Surd({15: Fraction(3, 16)})),
            (Surd({15: Fraction(3, 16)}), Surd({1: Fraction(11, 16)})),
        ),
        periods=(p_hat, xi * p_hat),
        image_lattice=(q, xi * q),
    )
    labels = tuple(f"{s}{o}" for s in "abcd" for o in range(6))
    return ModelSpec(
        name="cap",
        field=CAP,
        tile_labels=labels,
        generators=(u1, u2, u3, u4),
        expansion=tau * tau,
        antilinear=False,
        pf_eigenvalue=_el(CAP, 2, 3, 0, 0),      # tau^4
        displacement=_cap_displacement(),
        density_sq=_el(CAP, Fraction(1, 15), Fraction(-1, 25), 0, 0),
        window_volume=None,
        fourier_module_doc="(1+xi)(tau-xi) i/(3 sqrt15) * Z[tau,xi]",
        return_module_doc="(3 tau + 2 - xi) * Z[tau,xi]",
        deformations={"hat": hat},
        orientations=6,
        internal_cutoff=3.0,
        default_iters=15,
    )


def _build_casper_model() -> ModelSpec:
    xi = SPECTRE.gen("xi")
    g1 = _el(SPECTRE, -1, -1, 1, -2)
    g2 = xi * g1
    g3 = _el(SPECTRE, -2, 1, 2, 2)
    g4 = _el(SPECTRE, -2, -2, -1, 2)
    lam15 = _el(SPECTRE, -4, 0, 1, 0)            # sqrt15 = lam - 4
    i5 = _el(SPECTRE, Fraction(4, 3), Fraction(-8, 3), Fraction(-1, 3),
             Fraction(2, 3))                     # i*sqrt5
    hex_period = lam15 / 45
    ht_period = (SPECTRE.rational(5) + 2 * lam15 - 2 * i5) / 45
    deformations = {
        "hex": DeformationMap(
            name="hex",
            rows=((Surd.rational(-1), Surd.rational(0)),
                  (Surd.rational(0), Surd.rational(1))),
            periods=(hex_period, xi * hex_period),
        ),
        "ht": DeformationMap(
            name="ht",
            rows=(
                (Surd({15: Fraction(44, 201), 1: Fraction(-231, 201)}),
                 Surd({3: Fraction(80, 201), 5: Fraction(-84, 201)})),
                (Surd({3: Fraction(80, 201), 5: Fraction(-84, 201)}),
                 Surd({1: Fraction(231, 201), 15: Fraction(-44, 201)})),
            ),
            periods=(ht_period, xi * ht_period),
        ),
        "spectre": DeformationMap(
            name="spectre",
            rows=(
                (Surd({5: Fraction(1, 2), 3: Fraction(-5, 6)}),
                 Surd({1: Fraction(1, 2), 15: Fraction(-1, 6)})),
                (Surd({1: Fraction(1, 2), 15: Fraction(-1, 6)}),
                 Surd({5: Fraction(-1, 2), 3: Fraction(5, 6)})),
            ),
        ),
    }
    labels = tuple(f"t{i:02d}" for i in range(54))
    rho = (1 - xi + SPECTRE.gen("lam")) / 3      # expansion, applied antilinearly
    return ModelSpec(
        name="casper_scaffold",
        field=SPECTRE,
        tile_labels=labels,
        generators=(g1, g1 - g2, g3, g4),
        expansion=rho,
        antilinear=True,
        pf_eigenvalue=SPECTRE.gen("lam"),
        displacement=None,
        density_sq=_el(SPECTRE, Fraction(7, 108), 0, Fraction(-2, 243), 0),
        window_volume=Surd({3: 270, 5: Fraction(-405, 2)}),
        fourier_module_doc="i sqrt5 / 135 * R_CASPr",
        return_module_doc="ideal (g1, g3) in Z[lam,xi]",
        deformations=deformations,
        orientations=None,
        internal_cutoff=3.0,
        default_iters=10,
    )


def builtin(name: str) -> ModelSpec:
    """Construct a built-in model by name."""
    if name == "silver":
        return _build_silver_model(False)
    if name == "silver_twisted":
        return _build_silver_model(True)
    if name == "cap":
        return _build_cap_model()
    if name == "casper_scaffold":
        return _build_casper_model()
    raise KeyError(f"unknown model {name!r}; available: {BUILTIN_NAMES}")


def builtin_names() -> tuple:
    return BUILTIN_NAMES


# ---------------------------------------------------------------------------
# Sixfold symmetry validation

@dataclass
class SymmetryReport:
    exact_violations: list
    max_numeric_residual: float
    n_sampled: int

    @property
    def ok(self) -> bool:
        return not self.exact_violations and self.max_numeric_residual < 1e-12


def validate_symmetry(model: ModelSpec, n_samples: int = 20,
                      seed: int = 0) -> SymmetryReport:
    """Check the sixfold conjugation identity of the displacement matrix.

    Exactly: T[sigma(i)][sigma(j)] == xi * T[i][j] as sets, where sigma
    advances the orientation index within each shape.  Numerically:
    S^T B(k) S == B(xi k) at sampled internal arguments.
    """
    if model.orientations != 6:
        raise ModelDataError(
            f"model {model.name!r} has no sixfold orientation structure")
    disp = model.require_displacement()
    xi = model.field.gen("xi")
    n = disp.n
    ori = model.orientations

    def sigma(i):
        return (i // ori) * ori + (i % ori + 1) % ori

    violations = []
    for i in range(n):
        for j in range(n):
            rotated = {(xi * t).coords for t in disp.entries[i][j]}
            target = {t.coords for t in disp.entries[sigma(i)][sigma(j)]}
            if rotated != target:
                violations.append((i, j))

    from .cocycle import FourierEvaluator  # local import avoids a cycle
    ev = FourierEvaluator(model)
    perm = np.array([sigma(i) for i in range(n)])
    xi_phys = xi.embed_phys()
    rot = np.array([[xi_phys[0], -xi_phys[1]], [xi_phys[1], xi_phys[0]]])
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        k = rng.uniform(-2.0, 2.0, size=2)
        B = ev.fourier_matrix(k)
        lhs = B[np.ix_(perm, perm)]          # (S^T B S)_{ij} = B_{sigma(i) sigma(j)}
        rhs = ev.fourier_matrix(rot @ k)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return SymmetryReport(violations, worst, n_samples)
