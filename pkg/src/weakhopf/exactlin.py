"""Exact scalars and dense multilinear algebra over Q and prime fields.

Everything else in the package computes in the types defined here: finite
dimensional spaces with named bases, vectors, and linear maps stored as
dense matrices of exact field elements.  There are no tolerances anywhere;
equality of maps is entrywise equality of exact scalars.

The flattened tensor index convention is fixed once, in ``tensor_space``:
the rightmost factor index varies fastest, and the label of a tensor basis
element is the "⊗"-join of the component labels.  Because labels are joined
flat, iterated tensor products associate on the nose: (A⊗B)⊗C and A⊗(B⊗C)
are the same ``Space`` value, and no associator bookkeeping is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iterproduct

__all__ = [
    "FieldMismatchError",
    "ShapeMismatchError",
    "PrimeFieldElement",
    "RationalField",
    "PrimeField",
    "QQ",
    "field_from_descriptor",
    "Space",
    "scalar_space",
    "tensor_space",
    "Vector",
    "LinMap",
    "tensor_map",
    "flip",
    "permute_factors",
    "lunit",
    "lunit_inv",
    "runit",
    "runit_inv",
    "const_left",
    "const_right",
    "image_basis",
    "express",
    "in_span",
    "spans_equal",
    "rank",
    "invert",
    "maps_equal",
]

TENSOR_SEP = "⊗"


class FieldMismatchError(ValueError):
    """Operands live over different ground fields."""


class ShapeMismatchError(ValueError):
    """Operands have incompatible spaces or dimensions."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeFieldElement:
    """Residue in [0, p) for a prime p; all arithmetic mod p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        object.__setattr__(self, "value", value % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, *args):
        raise AttributeError("PrimeFieldElement is immutable")

    def _coerce(self, other) -> "PrimeFieldElement":
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
            return other
        if isinstance(other, int):
            return PrimeFieldElement(other, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.value + other.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.value - other.value, self.p)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(other.value - self.value, self.p)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.value * other.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return PrimeFieldElement(self.value * pow(other.value, -1, self.p), self.p)

    def __neg__(self):
        return PrimeFieldElement(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, PrimeFieldElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


@dataclass(frozen=True)
class RationalField:
    """The field Q; scalars are fractions.Fraction (always in lowest terms)."""

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into Q")

    def parse(self, s: str):
        return Fraction(s)

    def format(self, x) -> str:
        return str(x)

    def descriptor(self):
        return "Q"

    def __repr__(self):
        return "Q"


@dataclass(frozen=True)
class PrimeField:
    """The field F_p for a prime p; scalars are PrimeFieldElement residues."""

    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"modulus {self.p} is not prime")

    @property
    def zero(self):
        return PrimeFieldElement(0, self.p)

    @property
    def one(self):
        return PrimeFieldElement(1, self.p)

    def from_int(self, n: int):
        return PrimeFieldElement(n, self.p)

    def coerce(self, x):
        if isinstance(x, PrimeFieldElement):
            if x.p != self.p:
                raise FieldMismatchError(f"F_{self.p} vs F_{x.p}")
            return x
        if isinstance(x, int):
            return PrimeFieldElement(x, self.p)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into F_{self.p}")

    def parse(self, s: str):
        if "/" in s:
            num, den = s.split("/", 1)
            return self.from_int(int(num)) / self.from_int(int(den))
        return self.from_int(int(s))

    def format(self, x) -> str:
        return str(self.coerce(x).value)

    def descriptor(self):
        return {"Fp": self.p}

    def __repr__(self):
        return f"F_{self.p}"


QQ = RationalField()


def field_from_descriptor(desc):
    """Inverse of Field.descriptor(): "Q" or {"Fp": p}."""
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and set(desc) == {"Fp"}:
        return PrimeField(int(desc["Fp"]))
    raise ValueError(f"unknown field descriptor {desc!r}")


@dataclass(frozen=True)
class Space:
    """Finite dimensional vector space with a named, ordered basis."""

    field: object
    labels: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be pairwise distinct")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis_vector(self, i: int) -> "Vector":
        coords = [self.field.zero] * self.dim
        coords[i] = self.field.one
        return Vector(self, tuple(coords))

    def basis(self) -> list["Vector"]:
        return [self.basis_vector(i) for i in range(self.dim)]

    def zero_vector(self) -> "Vector":
        return Vector(self, tuple([self.field.zero] * self.dim))

    def vector(self, coords) -> "Vector":
        if len(coords) != self.dim:
            raise ShapeMismatchError(f"expected {self.dim} coordinates, got {len(coords)}")
        return Vector(self, tuple(self.field.coerce(c) for c in coords))

    def __matmul__(self, other: "Space") -> "Space":
        return tensor_space(self, other)

    def __repr__(self):
        return f"Space({self.field!r}, dim={self.dim})"


def scalar_space(field) -> Space:
    """The ground field as a 1-dimensional space (basis label "1")."""
    return Space(field, ("1",))


def tensor_space(a: Space, b: Space) -> Space:
    """Tensor product space; rightmost index fastest, labels joined flat.

    The label ordering is part of the public contract: basis element
    (i, j) of a⊗b sits at flat index i*dim(b) + j.
    """
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field!r} vs {b.field!r}")
    labels = tuple(f"{la}{TENSOR_SEP}{lb}" for la in a.labels for lb in b.labels)
    return Space(a.field, labels)


@dataclass(frozen=True)
class Vector:
    space: Space
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.space.dim:
            raise ShapeMismatchError("coordinate count != space dimension")

    @property
    def field(self):
        return self.space.field

    def is_zero(self) -> bool:
        return all(not c for c in self.coords)

    def __add__(self, other: "Vector") -> "Vector":
        if self.space != other.space:
            raise ShapeMismatchError("vector addition needs a common space")
        return Vector(self.space, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        if self.space != other.space:
            raise ShapeMismatchError("vector subtraction needs a common space")
        return Vector(self.space, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, scalar) -> "Vector":
        s = self.field.coerce(scalar)
        return Vector(self.space, tuple(s * c for c in self.coords))

    def __rmul__(self, scalar) -> "Vector":
        return self.scale(scalar)

    def __matmul__(self, other: "Vector") -> "Vector":
        space = tensor_space(self.space, other.space)
        coords = tuple(a * b for a in self.coords for b in other.coords)
        return Vector(space, coords)

    def format_coords(self) -> list[str]:
        return [self.field.format(c) for c in self.coords]

    def __repr__(self):
        terms = [
            f"{self.field.format(c)}·{lbl}"
            for c, lbl in zip(self.coords, self.space.labels)
            if c
        ]
        return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class LinMap:
    """Linear map as a dense (dst.dim × src.dim) matrix of exact scalars."""

    src: Space
    dst: Space
    rows: tuple[tuple, ...]

    def __post_init__(self):
        if self.src.field != self.dst.field:
            raise FieldMismatchError(f"{self.src.field!r} vs {self.dst.field!r}")
        if len(self.rows) != self.dst.dim or any(len(r) != self.src.dim for r in self.rows):
            raise ShapeMismatchError("matrix shape does not match the two spaces")

    @property
    def field(self):
        return self.src.field

    @staticmethod
    def from_rows(src: Space, dst: Space, rows) -> "LinMap":
        field = src.field
        return LinMap(src, dst, tuple(tuple(field.coerce(x) for x in row) for row in rows))

    @staticmethod
    def from_columns(src: Space, dst: Space, columns: list[Vector]) -> "LinMap":
        if len(columns) != src.dim:
            raise ShapeMismatchError("need one column per source basis vector")
        for c in columns:
            if c.space != dst:
                raise ShapeMismatchError("column not in the codomain space")
        rows = tuple(tuple(c.coords[i] for c in columns) for i in range(dst.dim))
        return LinMap(src, dst, rows)

    @staticmethod
    def from_function(src: Space, dst: Space, fn) -> "LinMap":
        """Build from a function taking each source basis Vector to a dst Vector."""
        return LinMap.from_columns(src, dst, [fn(v) for v in src.basis()])

    @staticmethod
    def identity(space: Space) -> "LinMap":
        one, zero = space.field.one, space.field.zero
        rows = tuple(
            tuple(one if i == j else zero for j in range(space.dim)) for i in range(space.dim)
        )
        return LinMap(space, space, rows)

    @staticmethod
    def zero(src: Space, dst: Space) -> "LinMap":
        z = src.field.zero
        return LinMap(src, dst, tuple(tuple(z for _ in range(src.dim)) for _ in range(dst.dim)))

    def column(self, j: int) -> Vector:
        return Vector(self.dst, tuple(row[j] for row in self.rows))

    def columns(self) -> list[Vector]:
        return [self.column(j) for j in range(self.src.dim)]

    def apply(self, v: Vector) -> Vector:
        if v.space != self.src:
            raise ShapeMismatchError("vector not in the domain of the map")
        zero = self.field.zero
        out = []
        for row in self.rows:
            acc = zero
            for a, x in zip(row, v.coords):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return Vector(self.dst, tuple(out))

    def __mul__(self, other: "LinMap") -> "LinMap":
        """Composition self∘other (apply other first)."""
        if other.dst != self.src:
            raise ShapeMismatchError("composition: inner spaces differ")
        zero = self.field.zero
        n, m, k = self.dst.dim, other.src.dim, self.src.dim
        out = [[zero] * m for _ in range(n)]
        for t in range(k):
            row_b = other.rows[t]
            for i in range(n):
                a = self.rows[i][t]
                if not a:
                    continue
                out_i = out[i]
                for j in range(m):
                    b = row_b[j]
                    if b:
                        out_i[j] = out_i[j] + a * b
        return LinMap(other.src, self.dst, tuple(tuple(r) for r in out))

    def __matmul__(self, other: "LinMap") -> "LinMap":
        return tensor_map(self, other)

    def __add__(self, other: "LinMap") -> "LinMap":
        if self.src != other.src or self.dst != other.dst:
            raise ShapeMismatchError("map addition needs equal domains and codomains")
        rows = tuple(
            tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )
        return LinMap(self.src, self.dst, rows)

    def __sub__(self, other: "LinMap") -> "LinMap":
        if self.src != other.src or self.dst != other.dst:
            raise ShapeMismatchError("map subtraction needs equal domains and codomains")
        rows = tuple(
            tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)
        )
        return LinMap(self.src, self.dst, rows)

    def is_zero(self) -> bool:
        return all(not x for row in self.rows for x in row)

    def transposed(self, new_src: Space, new_dst: Space) -> "LinMap":
        """Matrix transpose, re-housed in caller-supplied (dual) spaces."""
        if new_src.dim != self.dst.dim or new_dst.dim != self.src.dim:
            raise ShapeMismatchError("transpose: dual space dimensions do not match")
        rows = tuple(tuple(self.rows[i][j] for i in range(self.dst.dim)) for j in range(self.src.dim))
        return LinMap(new_src, new_dst, rows)

    def __repr__(self):
        return f"LinMap({self.src.dim}→{self.dst.dim} over {self.field!r})"


def maps_equal(f: LinMap, g: LinMap) -> bool:
    """Exact entrywise equality; raises if the maps have different spaces."""
    if f.src != g.src or f.dst != g.dst:
        raise ShapeMismatchError("maps_equal: domain or codomain differs")
    return f.rows == g.rows


def tensor_map(f: LinMap, g: LinMap) -> LinMap:
    """Kronecker product consistent with the tensor_space flat ordering."""
    src = tensor_space(f.src, g.src)
    dst = tensor_space(f.dst, g.dst)
    gd, gs = g.dst.dim, g.src.dim
    rows = []
    for fi in range(f.dst.dim):
        frow = f.rows[fi]
        for gi in range(gd):
            grow = g.rows[gi]
            rows.append(tuple(frow[fj] * grow[gj] for fj in range(f.src.dim) for gj in range(gs)))
    return LinMap(src, dst, tuple(rows))


def permute_factors(spaces: list[Space], perm: tuple[int, ...]) -> LinMap:
    """The map v_0⊗…⊗v_{k-1} ↦ v_{perm[0]}⊗…⊗v_{perm[k-1]}.

    perm[t] names the input factor placed at output position t.
    """
    if sorted(perm) != list(range(len(spaces))):
        raise ValueError(f"{perm} is not a permutation of the factors")
    src = spaces[0]
    for s in spaces[1:]:
        src = tensor_space(src, s)
    out_spaces = [spaces[perm[t]] for t in range(len(spaces))]
    dst = out_spaces[0]
    for s in out_spaces[1:]:
        dst = tensor_space(dst, s)
    dims = [s.dim for s in spaces]
    zero, one = src.field.zero, src.field.one
    rows = [[zero] * src.dim for _ in range(dst.dim)]
    for multi in iterproduct(*[range(d) for d in dims]):
        src_flat = 0
        for d, i in zip(dims, multi):
            src_flat = src_flat * d + i
        dst_flat = 0
        for t in range(len(spaces)):
            dst_flat = dst_flat * dims[perm[t]] + multi[perm[t]]
        rows[dst_flat][src_flat] = one
    return LinMap(src, dst, tuple(tuple(r) for r in rows))


def flip(a: Space, b: Space) -> LinMap:
    """τ_{a,b}: v⊗w ↦ w⊗v."""
    return permute_factors([a, b], (1, 0))


def lunit(k: Space, v: Space) -> LinMap:
    """Natural identification k⊗V → V for the 1-dimensional scalar space k."""
    if k.dim != 1:
        raise ShapeMismatchError("lunit needs a 1-dimensional left factor")
    return LinMap(tensor_space(k, v), v, LinMap.identity(v).rows)


def lunit_inv(k: Space, v: Space) -> LinMap:
    if k.dim != 1:
        raise ShapeMismatchError("lunit_inv needs a 1-dimensional left factor")
    return LinMap(v, tensor_space(k, v), LinMap.identity(v).rows)


def runit(v: Space, k: Space) -> LinMap:
    """Natural identification V⊗k → V."""
    if k.dim != 1:
        raise ShapeMismatchError("runit needs a 1-dimensional right factor")
    return LinMap(tensor_space(v, k), v, LinMap.identity(v).rows)


def runit_inv(v: Space, k: Space) -> LinMap:
    if k.dim != 1:
        raise ShapeMismatchError("runit_inv needs a 1-dimensional right factor")
    return LinMap(v, tensor_space(v, k), LinMap.identity(v).rows)


def const_left(c: Vector, v: Space) -> LinMap:
    """The map V → space(c)⊗V, w ↦ c⊗w."""
    src = v
    dst = tensor_space(c.space, v)
    zero = v.field.zero
    rows = []
    for i in range(c.space.dim):
        ci = c.coords[i]
        for j in range(v.dim):
            rows.append(tuple(ci if t == j else zero for t in range(v.dim)))
    return LinMap(src, dst, tuple(rows))


def const_right(c: Vector, v: Space) -> LinMap:
    """The map V → V⊗space(c), w ↦ w⊗c."""
    dst = tensor_space(v, c.space)
    zero = v.field.zero
    rows = []
    for j in range(v.dim):
        for i in range(c.space.dim):
            ci = c.coords[i]
            rows.append(tuple(ci if t == j else zero for t in range(v.dim)))
    return LinMap(v, dst, tuple(rows))


def _rref_columns(columns: list[Vector], space: Space) -> list[list]:
    """Reduced column echelon: pivots chosen first nonzero row, columns left to right."""
    basis: list[list] = []  # mutable coordinate lists, kept sorted by pivot row
    pivots: list[int] = []
    for col in columns:
        work = list(col.coords)
        # eliminate existing pivot rows
        for p, b in zip(pivots, basis):
            factor = work[p]
            if factor:
                for i in range(len(work)):
                    if b[i]:
                        work[i] = work[i] - factor * b[i]
        piv = next((i for i, x in enumerate(work) if x), None)
        if piv is None:
            continue
        lead = work[piv]
        work = [x / lead for x in work]
        # back-eliminate the new pivot row from the stored basis
        for b in basis:
            factor = b[piv]
            if factor:
                for i in range(len(b)):
                    if work[i]:
                        b[i] = b[i] - factor * work[i]
        basis.append(work)
        pivots.append(piv)
        order = sorted(range(len(pivots)), key=lambda t: pivots[t])
        basis = [basis[t] for t in order]
        pivots = [pivots[t] for t in order]
    return basis


def image_basis(f: LinMap) -> list[Vector]:
    """Deterministic reduced-echelon basis of the column space; [] for the zero map."""
    return [Vector(f.dst, tuple(b)) for b in _rref_columns(f.columns(), f.dst)]


def rank(vectors: list[Vector]) -> int:
    if not vectors:
        return 0
    return len(_rref_columns(vectors, vectors[0].space))


def in_span(vectors: list[Vector], v: Vector) -> bool:
    """Exact membership test: adjoining v must not raise the rank."""
    if v.is_zero():
        return True
    if not vectors:
        return False
    return rank(vectors) == rank(vectors + [v])


def spans_equal(a: list[Vector], b: list[Vector]) -> bool:
    ra, rb = rank(a), rank(b)
    if ra != rb:
        return False
    return rank(a + b) == ra


def express(basis: list[Vector], v: Vector):
    """Coordinates of v in a linearly independent spanning list, or None.

    Solves exactly by Gaussian elimination on the augmented system; the
    basis vectors must be linearly independent.
    """
    if not basis:
        return [] if v.is_zero() else None
    space = basis[0].space
    if v.space != space:
        raise ShapeMismatchError("vector not in the span's ambient space")
    field = space.field
    n, k = space.dim, len(basis)
    aug = [[basis[j].coords[i] for j in range(k)] + [v.coords[i]] for i in range(n)]
    pivot_of_col: list[int | None] = [None] * k
    r = 0
    for c in range(k):
        pr = next((i for i in range(r, n) if aug[i][c]), None)
        if pr is None:
            continue
        aug[r], aug[pr] = aug[pr], aug[r]
        lead = aug[r][c]
        aug[r] = [x / lead for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c]:
                factor = aug[i][c]
                aug[i] = [x - factor * y for x, y in zip(aug[i], aug[r])]
        pivot_of_col[c] = r
        r += 1
    if any(p is None for p in pivot_of_col):
        raise ValueError("express: basis vectors are linearly dependent")
    # inconsistent rows mean v is outside the span
    for i in range(r, n):
        if aug[i][k]:
            return None
    coords = [field.zero] * k
    for c in range(k):
        coords[c] = aug[pivot_of_col[c]][k]
    return coords


def invert(f: LinMap) -> LinMap:
    """Exact inverse of a square invertible map."""
    if f.src.dim != f.dst.dim:
        raise ShapeMismatchError("only square maps can be inverted")
    columns_of_f = f.columns()
    cols = []
    for v in f.dst.basis():
        sol = express(columns_of_f, v)
        if sol is None:
            raise ValueError("map is not invertible")
        cols.append(Vector(f.src, tuple(sol)))
    return LinMap.from_columns(f.dst, f.src, cols)
