"""Finite Weyl groups realized as permutation groups of their root systems.

Everything is exact.  A group is stored as the list of its elements written as
permutations of a finite root set; multiplication is composition of
permutations, so equality of elements is equality of index tuples.

Conventions for Cartan matrices: ``a[i][j] = <alpha_i^vee, alpha_j>`` so the
simple reflection acts by ``s_i(alpha_j) = alpha_j - a[i][j] alpha_i``.
Labelling of the simple roots:

* ``B_n``: alpha_n is short;  ``C_n``: alpha_n is long;
* ``G_2``: alpha_1 is short, alpha_2 long;  ``F_4``: alpha_1, alpha_2 long;
* ``D_n``, ``E_n``: Bourbaki numbering.
"""

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
import re
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .errors import ValidationError

Vector = Tuple[int, ...]
Matrix = Tuple[Tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# Cartan data
# ---------------------------------------------------------------------------

def _cartan_simple(kind: str, rank: int) -> List[List[int]]:
    a = [[2 if i == j else 0 for j in range(rank)] for i in range(rank)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if kind == "A":
        if rank < 1:
            raise ValidationError("A_n needs n >= 1")
        for i in range(rank - 1):
            link(i, i + 1)
    elif kind == "B":
        if rank < 2:
            raise ValidationError("B_n needs n >= 2")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 2, rank - 1, -1, -2)
    elif kind == "C":
        if rank < 2:
            raise ValidationError("C_n needs n >= 2")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 2, rank - 1, -2, -1)
    elif kind == "D":
        if rank < 4:
            raise ValidationError("D_n needs n >= 4")
        for i in range(rank - 2):
            link(i, i + 1)
        link(rank - 3, rank - 1)
    elif kind == "G":
        if rank != 2:
            raise ValidationError("G has rank 2 only")
        link(0, 1, -3, -1)
    elif kind == "F":
        if rank != 4:
            raise ValidationError("F has rank 4 only")
        link(0, 1)
        link(1, 2, -1, -2)
        link(2, 3)
    elif kind == "E":
        if rank not in (6, 7, 8):
            raise ValidationError("E_n needs n in 6, 7, 8")
        link(0, 2)
        link(1, 3)
        link(2, 3)
        for i in range(3, rank - 1):
            link(i, i + 1)
    else:
        raise ValidationError(f"unknown Cartan type {kind!r}")
    return a


def symmetrizer(a: Sequence[Sequence[int]]) -> List[Fraction]:
    """Positive d_i with d_i a_ij = d_j a_ji, normalised to 1 on the shortest root of each component."""
    n = len(a)
    d: List[Optional[Fraction]] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j != i and a[i][j] != 0:
                    if a[j][i] == 0:
                        raise ValidationError("Cartan matrix is not symmetrizable")
                    val = d[i] * Fraction(a[i][j], a[j][i])
                    if d[j] is None:
                        d[j] = val
                        comp.append(j)
                        queue.append(j)
                    elif d[j] != val:
                        raise ValidationError("Cartan matrix is not symmetrizable")
        m = min(d[i] for i in comp)
        for i in comp:
            d[i] = d[i] / m
    return d  # type: ignore[return-value]


@dataclass(frozen=True)
class CartanDatum:
    """A Cartan matrix together with its type label and simple-root labels."""

    label: str
    matrix: Matrix
    root_labels: Tuple[str, ...]

    def __post_init__(self):
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ValidationError("Cartan matrix must be square")
        for i in range(n):
            if self.matrix[i][i] != 2:
                raise ValidationError("Cartan matrix must have 2 on the diagonal")
            for j in range(n):
                if i != j and (self.matrix[i][j] > 0 or (self.matrix[i][j] == 0) != (self.matrix[j][i] == 0)):
                    raise ValidationError("invalid off-diagonal Cartan entries")
        d = symmetrizer(self.matrix)
        sym = sympy.Matrix(n, n, lambda i, j: d[i] * self.matrix[i][j])
        for k in range(1, n + 1):
            if sym[:k, :k].det() <= 0:
                raise ValidationError(f"Cartan matrix {self.label} is not of finite type")
        if len(self.root_labels) != n:
            raise ValidationError("one label per simple root is required")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @classmethod
    def from_type(cls, label: str) -> "CartanDatum":
        """Parse labels such as ``A2``, ``B2``, ``G2`` or products ``A2xA2``."""
        parts = [p for p in re.split(r"[x×*]", label.replace(" ", "")) if p]
        if not parts:
            raise ValidationError("empty Cartan type")
        blocks = []
        for p in parts:
            m = re.fullmatch(r"([A-Ga-g])(\d+)", p)
            if not m:
                raise ValidationError(f"cannot parse Cartan type {p!r}")
            blocks.append(_cartan_simple(m.group(1).upper(), int(m.group(2))))
        n = sum(len(b) for b in blocks)
        mat = [[0] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                for j, v in enumerate(row):
                    mat[off + i][off + j] = v
            off += len(b)
        norm = "x".join(p.upper() for p in parts)
        return cls(norm, tuple(tuple(r) for r in mat), tuple(str(i + 1) for i in range(n)))

    @classmethod
    def from_json(cls, doc: dict) -> "CartanDatum":
        if "matrix" in doc:
            mat = tuple(tuple(int(v) for v in row) for row in doc["matrix"])
            labels = tuple(doc.get("labels") or (str(i + 1) for i in range(len(mat))))
            return cls(doc.get("type", "custom"), mat, labels)
        if "type" not in doc:
            raise ValidationError("Cartan document needs 'type' or 'matrix'")
        t = str(doc["type"])
        if "rank" in doc and not re.search(r"\d", t):
            t = f"{t}{int(doc['rank'])}"
        return cls.from_type(t)

    def to_json(self) -> dict:
        return {"type": self.label, "matrix": [list(r) for r in self.matrix]}


# ---------------------------------------------------------------------------
# generic permutation groups
# ---------------------------------------------------------------------------

@dataclass
class ConjugacyClass:
    index: int
    representative: int
    elements: List[int]
    label: str

    @property
    def size(self) -> int:
        return len(self.elements)


class FiniteGroup:
    """A finite group of permutations of ``range(degree)``.

    Element 0 is the identity.  ``words[i]`` is a shortest word in the
    generators (left to right = leftmost factor first) representing element i.
    """

    def __init__(self, perms: Sequence[Sequence[int]], generators: Sequence[int],
                 words: Sequence[Tuple[int, ...]], name: str = "G"):
        self.perms = np.asarray(perms, dtype=np.int32)
        if self.perms.ndim != 2:
            raise ValidationError("permutations must form a 2-d array")
        self.name = name
        self.generators = list(generators)
        self.words = [tuple(w) for w in words]
        self._lookup = {row.tobytes(): i for i, row in enumerate(self.perms)}
        if len(self._lookup) != len(self.perms):
            raise ValidationError("duplicate elements")
        if not np.array_equal(self.perms[0], np.arange(self.perms.shape[1])):
            raise ValidationError("element 0 must be the identity")

    # construction ------------------------------------------------------
    @classmethod
    def generate(cls, gen_perms: Sequence[Sequence[int]], name: str = "G",
                 limit: int = 2_000_000, degree: Optional[int] = None) -> "FiniteGroup":
        """Breadth-first closure of the given generating permutations."""
        gens = [np.asarray(p, dtype=np.int32) for p in gen_perms]
        if degree is None:
            degree = len(gens[0]) if gens else 0
        ident = np.arange(degree, dtype=np.int32)
        perms = [ident]
        words = [()]
        seen = {ident.tobytes(): 0}
        gen_idx = []
        for g in gens:
            key = g.tobytes()
            if key not in seen:
                seen[key] = len(perms)
                perms.append(g)
                words.append((len(gen_idx),))
            gen_idx.append(seen[key])
        queue = deque(range(1, len(perms)))
        while queue:
            i = queue.popleft()
            p = perms[i]
            for k, g in enumerate(gens):
                q = g[p]
                key = q.tobytes()
                if key not in seen:
                    seen[key] = len(perms)
                    perms.append(q)
                    words.append((k,) + words[i])
                    queue.append(seen[key])
                    if len(perms) > limit:
                        raise ValidationError("group too large to enumerate")
        return cls(perms, gen_idx, words, name)

    # basic queries -----------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.perms)

    def __len__(self) -> int:
        return len(self.perms)

    @property
    def identity(self) -> int:
        return 0

    @property
    def degree(self) -> int:
        return self.perms.shape[1]

    def index_of_perm(self, perm) -> int:
        key = np.asarray(perm, dtype=np.int32).tobytes()
        try:
            return self._lookup[key]
        except KeyError:
            raise ValidationError("permutation is not an element of the group") from None

    def contains_perm(self, perm) -> bool:
        return np.asarray(perm, dtype=np.int32).tobytes() in self._lookup

    def mul(self, a: int, b: int) -> int:
        """Index of the product a*b (apply b first)."""
        return self._lookup[self.perms[a][self.perms[b]].tobytes()]

    def mul_many(self, a: int, bs: Sequence[int]) -> List[int]:
        rows = self.perms[a][self.perms[list(bs)]]
        return [self._lookup[r.tobytes()] for r in rows]

    @cached_property
    def inverses(self) -> List[int]:
        inv = np.argsort(self.perms, axis=1).astype(np.int32)
        return [self._lookup[r.tobytes()] for r in inv]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 0
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    @cached_property
    def element_orders(self) -> List[int]:
        orders = []
        for a in range(self.order):
            k, x = 1, a
            while x != 0:
                x = self.mul(x, a)
                k += 1
            orders.append(k)
        return orders

    @cached_property
    def exponent(self) -> int:
        from math import lcm
        e = 1
        for o in set(self.element_orders):
            e = lcm(e, o)
        return e

    def from_word(self, word: Sequence[int]) -> int:
        x = 0
        for k in word:
            x = self.mul(x, self.generators[k])
        return x

    def word_string(self, a: int) -> str:
        return "".join(str(k + 1) for k in self.words[a]) or "1"

    @cached_property
    def multiplication_table(self) -> np.ndarray:
        n = self.order
        tab = np.empty((n, n), dtype=np.int32)
        for a in range(n):
            tab[a] = self.mul_many(a, range(n))
        return tab

    # classes ---------------------------------------------------------------
    def _conjugation_maps(self) -> List[List[int]]:
        maps = []
        for g in self.generators:
            left = self.mul_many(g, range(self.order))
            gi = self.inv(g)
            maps.append([self.mul(x, gi) for x in left])
        return maps

    @cached_property
    def classes(self) -> List[ConjugacyClass]:
        maps = self._conjugation_maps()
        label = [-1] * self.order
        classes = []
        for start in range(self.order):
            if label[start] >= 0:
                continue
            idx = len(classes)
            orbit = [start]
            label[start] = idx
            pos = 0
            while pos < len(orbit):
                x = orbit[pos]
                pos += 1
                for m in maps:
                    y = m[x]
                    if label[y] < 0:
                        label[y] = idx
                        orbit.append(y)
            rep = min(orbit, key=lambda e: (len(self.words[e]), self.words[e]))
            classes.append(ConjugacyClass(idx, rep, sorted(orbit), self.word_string(rep)))
        return classes

    @cached_property
    def class_of(self) -> List[int]:
        out = [0] * self.order
        for c in self.classes:
            for e in c.elements:
                out[e] = c.index
        return out

    @property
    def class_sizes(self) -> List[int]:
        return [c.size for c in self.classes]

    @property
    def class_reps(self) -> List[int]:
        return [c.representative for c in self.classes]

    def centralizer_order(self, class_index: int) -> int:
        return self.order // self.classes[class_index].size

    @cached_property
    def inverse_class(self) -> List[int]:
        return [self.class_of[self.inv(c.representative)] for c in self.classes]

    def power_class(self, class_index: int, k: int) -> int:
        return self.class_of[self.power(self.classes[class_index].representative, k)]

    # subgroups -----------------------------------------------------------
    def closure(self, elements: Sequence[int]) -> List[int]:
        """Sorted element indices of the subgroup generated by ``elements``."""
        found = {0}
        frontier = [0]
        gens = list(dict.fromkeys(elements))
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in found:
                        found.add(y)
                        new.append(y)
            frontier = new
        return sorted(found)

    def subgroup(self, elements: Sequence[int], name: str = "H") -> "Subgroup":
        """The subgroup consisting of ``elements`` (closed under multiplication)."""
        elems = sorted(set(elements))
        gens: List[int] = []
        span = {0}
        for e in elems:
            if e not in span:
                gens.append(e)
                span = set(self.closure(gens))
        if span != set(elems):
            raise ValidationError("element set is not a subgroup")
        sub = FiniteGroup.generate([self.perms[g] for g in gens], name=name, degree=self.degree)
        emb = [self.index_of_perm(p) for p in sub.perms]
        return Subgroup(sub, self, emb)

    def is_subgroup(self, elements: Sequence[int]) -> bool:
        s = set(elements)
        if 0 not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s)


@dataclass
class Subgroup:
    """An enumerated group H together with its embedding into an ambient group."""

    group: FiniteGroup
    ambient: FiniteGroup
    embedding: List[int]

    @cached_property
    def image(self) -> Dict[int, int]:
        return {a: i for i, a in enumerate(self.embedding)}

    def restrict_index(self, ambient_element: int) -> int:
        return self.image[ambient_element]


# ---------------------------------------------------------------------------
# groups acting on a root system
# ---------------------------------------------------------------------------

def _apply(m: Matrix, v: Sequence) -> Tuple:
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m)))


def _normalize_vec(v) -> Tuple:
    out = []
    for c in v:
        c = Fraction(c)
        out.append(int(c) if c.denominator == 1 else c)
    return tuple(out)


class RootedGroup(FiniteGroup):
    """A finite linear group together with a root system it permutes.

    The first ``rank`` roots are the basis vectors (simple roots); positive
    roots precede negative ones, and ``roots[k + npos]`` is ``-roots[k]``.
    Group elements are stored as permutations of the roots, and the matrix of
    an element (in the basis of simple roots) is read off from the images of
    the basis vectors.
    """

    def __init__(self, gen_matrices: Sequence[Matrix], rank: int, name: str = "W"):
        self.rank = rank
        self.gen_matrices = [tuple(tuple(r) for r in m) for m in gen_matrices]
        basis = [tuple(1 if i == j else 0 for i in range(rank)) for j in range(rank)]
        seen = set(basis)
        queue = deque(basis)
        while queue:
            v = queue.popleft()
            for m in self.gen_matrices:
                w = _normalize_vec(_apply(m, v))
                if w not in seen and tuple(-c for c in w) not in seen:
                    seen.add(w)
                    queue.append(w)
        pos = []
        for v in seen:
            if all(c >= 0 for c in v):
                pos.append(v)
            elif all(c <= 0 for c in v):
                pos.append(tuple(-c for c in v))
            else:
                raise ValidationError(f"root {v} is neither positive nor negative")
        pos = sorted(set(pos), key=lambda v: (sum(v), tuple(-c for c in v)))
        if pos[:rank] != basis:
            raise ValidationError("basis vectors must be the simple roots")
        self.npos = len(pos)
        self.roots: List[Tuple] = pos + [tuple(-c for c in v) for v in pos]
        self.root_index = {v: i for i, v in enumerate(self.roots)}
        gen_perms = []
        for m in self.gen_matrices:
            perm = []
            for v in self.roots:
                w = _normalize_vec(_apply(m, v))
                if w not in self.root_index:
                    raise ValidationError("generator does not permute the roots")
                perm.append(self.root_index[w])
            gen_perms.append(perm)
        g = FiniteGroup.generate(gen_perms, name=name)
        super().__init__(g.perms, g.generators, g.words, name)

    def negate_root(self, k: int) -> int:
        return k + self.npos if k < self.npos else k - self.npos

    def is_positive(self, k: int) -> bool:
        return k < self.npos

    @cached_property
    def lengths(self) -> List[int]:
        return [int(x) for x in (self.perms[:, :self.npos] >= self.npos).sum(axis=1)]

    def length(self, w: int) -> int:
        return self.lengths[w]

    def matrix(self, w: int) -> Matrix:
        """Matrix of w on the span of the roots, in the simple-root basis."""
        cols = [self.roots[self.perms[w][j]] for j in range(self.rank)]
        return tuple(tuple(cols[j][i] for j in range(self.rank)) for i in range(self.rank))

    def apply_to_root(self, w: int, k: int) -> int:
        return int(self.perms[w][k])

    @cached_property
    def longest_element(self) -> int:
        return max(range(self.order), key=lambda w: self.lengths[w])

    def is_reflection(self, w: int) -> bool:
        if w == 0 or self.mul(w, w) != 0:
            return False
        m = sympy.Matrix(self.matrix(w)) - sympy.eye(self.rank)
        return m.rank() == 1

    @cached_property
    def reflections(self) -> List[int]:
        return [w for w in range(self.order) if self.is_reflection(w)]

    def reflection_root(self, w: int) -> int:
        """The positive root of smallest height sent to its negative by the reflection w."""
        cands = [k for k in range(self.npos) if self.perms[w][k] == k + self.npos]
        if not cands:
            raise ValidationError("element is not a reflection")
        return cands[0]

    def reflection_of_root(self, k: int) -> int:
        k = k if k < self.npos else k - self.npos
        for w in self.reflections:
            if self.reflection_root(w) == k:
                return w
        raise ValidationError(f"no reflection with root {self.roots[k]}")

    def is_reduced_root_system(self) -> bool:
        for v in self.roots[:self.npos]:
            if tuple(2 * c for c in v) in self.root_index:
                return False
        return True


class CoxeterGroupTable(RootedGroup):
    """The Weyl group of a Cartan datum acting on its root system."""

    def __init__(self, cartan: CartanDatum):
        self.cartan = cartan
        n = cartan.rank
        a = cartan.matrix
        mats = []
        for i in range(n):
            m = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
            for j in range(n):
                m[i][j] -= a[i][j]
            mats.append(tuple(tuple(r) for r in m))
        super().__init__(mats, n, name=f"W({cartan.label})")
        self.simple_reflections = list(self.generators)

    @property
    def type_label(self) -> str:
        return self.cartan.label

    @cached_property
    def root_norms(self) -> List[Fraction]:
        """Squared lengths (alpha, alpha) of all roots, normalised by the symmetrizer."""
        d = symmetrizer(self.cartan.matrix)
        n = self.rank
        form = [[d[i] * self.cartan.matrix[i][j] for j in range(n)] for i in range(n)]
        return [sum(v[i] * form[i][j] * v[j] for i in range(n) for j in range(n)) for v in self.roots]

    def is_long_root(self, k: int) -> bool:
        return self.root_norms[k] == max(self.root_norms)


def build_group(c) -> CoxeterGroupTable:
    """Enumerate the Weyl group of a Cartan datum (or a type label such as 'B2')."""
    if isinstance(c, str):
        c = CartanDatum.from_type(c)
    elif isinstance(c, dict):
        c = CartanDatum.from_json(c)
    return CoxeterGroupTable(c)


def conjugacy_classes(g: FiniteGroup) -> List[ConjugacyClass]:
    return g.classes


# ---------------------------------------------------------------------------
# Levi subsystems
# ---------------------------------------------------------------------------

@dataclass
class LeviDatum:
    group: CoxeterGroupTable
    simple: Tuple[int, ...]

    def __post_init__(self):
        self.simple = tuple(sorted(set(self.simple)))
        if any(i < 0 or i >= self.group.rank for i in self.simple):
            raise ValidationError("Levi subset contains an unknown simple root")

    @cached_property
    def elements(self) -> List[int]:
        return self.group.closure([self.group.simple_reflections[i] for i in self.simple])

    @cached_property
    def roots(self) -> List[int]:
        return [k for k, v in enumerate(self.group.roots)
                if all(v[i] == 0 for i in range(self.group.rank) if i not in self.simple)]

    @property
    def complement(self) -> Tuple[int, ...]:
        return tuple(i for i in range(self.group.rank) if i not in self.simple)

    @cached_property
    def longest_element(self) -> int:
        return max(self.elements, key=self.group.length)

    @property
    def rank(self) -> int:
        return len(self.simple)


def levi(g: CoxeterGroupTable, simple: Sequence[int]) -> LeviDatum:
    return LeviDatum(g, tuple(simple))


def _longest_of(g: CoxeterGroupTable, subset: Sequence[int]) -> int:
    return max(g.closure([g.simple_reflections[i] for i in subset]), key=g.length)


def _maps_simple_set(g: CoxeterGroupTable, w: int, subset: Sequence[int]) -> Optional[Tuple[int, ...]]:
    """If w sends {alpha_j : j in subset} onto a set of simple roots, return that set."""
    image = []
    for j in subset:
        k = int(g.perms[w][j])
        if k >= g.rank:
            return None
        image.append(k)
    return tuple(sorted(image))


@dataclass
class RelativeWeylGroup:
    """The relative Weyl group W_G(L) realised on the quotient V_G / V_L.

    ``group`` acts on the coordinates of Delta_G - Delta_L (the image of the
    simple roots outside L); ``embedding[x]`` is the element of W with
    ``w(Delta_L) = Delta_L`` representing x; ``coxeter_generators`` lists the
    elements s_{L,alpha} (keyed by the label of alpha) that lie in W_G(L).
    """

    ambient: CoxeterGroupTable
    levi: LeviDatum
    group: RootedGroup
    embedding: List[int]
    coxeter_generators: Dict[int, int]

    @property
    def order(self) -> int:
        return self.group.order

    def quotient_matrix(self, x: int) -> Matrix:
        return self.group.matrix(x)

    @cached_property
    def is_coxeter_generated(self) -> bool:
        gens = list(self.coxeter_generators.values())
        return len(self.group.closure(gens)) == self.group.order


def relative_weyl_group(g: CoxeterGroupTable, l: LeviDatum) -> RelativeWeylGroup:
    """Build W_G(L) from the elements w0^{M} w0^{J} connecting standard parabolic subsets.

    The elements nu(J, alpha) = w0^{J + alpha} w0^{J} send Delta_J onto another
    set of simple roots J'.  Following these moves from Delta_L gives a groupoid;
    its loops at L form N = {w : w Delta_L = Delta_L}, a complement of W_L in
    N_W(W_L).  Loops of length one are the reflections s_{L,alpha}.
    """
    start = l.simple
    comp_of = lambda J: [i for i in range(g.rank) if i not in J]
    path: Dict[Tuple[int, ...], int] = {start: 0}
    edges = []
    queue = deque([start])
    w0_cache: Dict[Tuple[int, ...], int] = {}

    def w0(J):
        if J not in w0_cache:
            w0_cache[J] = _longest_of(g, J)
        return w0_cache[J]

    while queue:
        J = queue.popleft()
        for a in comp_of(J):
            K = tuple(sorted(J + (a,)))
            nu = g.mul(w0(K), w0(J))
            J2 = _maps_simple_set(g, nu, J)
            if J2 is None:
                raise ValidationError("parabolic move did not land on simple roots")
            edges.append((J, a, nu, J2))
            if J2 not in path:
                path[J2] = g.mul(nu, path[J])
                queue.append(J2)
    loops = set()
    cox: Dict[int, int] = {}
    for J, a, nu, J2 in edges:
        loop = g.mul(g.inv(path[J2]), g.mul(nu, path[J]))
        if loop != 0:
            loops.add(loop)
        if J == start and J2 == start:
            cox[a] = nu
    elements = g.closure(sorted(loops))
    cbar = l.complement
    r = len(cbar)

    def qmatrix(w):
        cols = []
        for j in cbar:
            v = g.roots[g.perms[w][j]]
            cols.append([v[i] for i in cbar])
        return tuple(tuple(cols[j][i] for j in range(r)) for i in range(r))

    gen_elems = sorted(cox.values()) + sorted(loops - set(cox.values()))
    if r == 0:
        rel = RootedGroup([], 0, name="W_G(L)")
        return RelativeWeylGroup(g, l, rel, [0], {})
    rel = RootedGroup([qmatrix(w) for w in gen_elems] or [tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))],
                      r, name="W_G(L)")
    by_matrix = {qmatrix(w): w for w in elements}
    if len(by_matrix) != len(elements):
        raise ValidationError("relative Weyl group does not act faithfully on the quotient")
    embedding = []
    for x in range(rel.order):
        m = rel.matrix(x)
        if m not in by_matrix:
            raise ValidationError("quotient action produced an element outside N_W(L)")
        embedding.append(by_matrix[m])
    if len(embedding) != len(elements):
        raise ValidationError("relative Weyl group order mismatch")
    emb_index = {w: x for x, w in enumerate(embedding)}
    cox_rel = {cbar.index(a): emb_index[w] for a, w in cox.items()}
    return RelativeWeylGroup(g, l, rel, embedding, cox_rel)


# ---------------------------------------------------------------------------
# reflection subgroups and minimal coset representatives
# ---------------------------------------------------------------------------

@dataclass
class ReflectionSubgroupDatum:
    ambient: RootedGroup
    reflections: List[int]
    elements: List[int]
    psi: List[int]
    psi_positive: List[int]
    coxeter_generators: List[int]

    @property
    def order(self) -> int:
        return len(self.elements)


def reflection_subgroup(g: RootedGroup, reflections: Sequence[int]) -> ReflectionSubgroupDatum:
    """Closure of a set of reflections with its root subsystem and canonical generators."""
    for w in reflections:
        if not g.is_reflection(w):
            raise ValidationError(f"element {g.word_string(w)} is not a reflection")
    elems = g.closure(list(reflections))
    member = set(elems)
    psi_pos = []
    lines = set()
    for w in g.reflections:
        if w in member:
            k = g.reflection_root(w)
            if k not in lines:
                lines.add(k)
                psi_pos.append(k)
    psi_pos.sort()
    psi = psi_pos + [g.negate_root(k) for k in psi_pos]
    J = []
    for w in elems:
        neg = sum(1 for k in psi_pos if not g.is_positive(g.apply_to_root(w, k)))
        if neg == 1:
            J.append(w)
    return ReflectionSubgroupDatum(g, list(reflections), elems, psi, psi_pos, J)


def right_cosets(g: FiniteGroup, elements: Sequence[int]) -> List[List[int]]:
    """The cosets x*R of the subgroup R, each sorted, in order of first element."""
    seen = set()
    out = []
    for x in range(g.order):
        if x in seen:
            continue
        coset = sorted(g.mul(x, r) for r in elements)
        seen.update(coset)
        out.append(coset)
    return out


def minimal_coset_rep(ambient: RootedGroup, r: ReflectionSubgroupDatum, coset: Sequence[int]) -> int:
    """The unique x in the coset x*R with x(Psi^+) inside the positive roots."""
    coset = sorted(set(coset))
    if not coset:
        raise ValidationError("empty coset")
    expected = sorted(ambient.mul(coset[0], y) for y in r.elements)
    if expected != coset:
        raise ValidationError("input is not a single coset of the reflection subgroup")
    good = [x for x in coset
            if all(ambient.is_positive(ambient.apply_to_root(x, k)) for k in r.psi_positive)]
    if len(good) != 1:
        raise ValidationError(f"expected one minimal representative, found {len(good)}")
    x = good[0]
    lx = ambient.length(x)
    if any(ambient.length(y) <= lx for y in coset if y != x):
        raise ValidationError("minimal representative is not strictly shortest")
    return x


# ---------------------------------------------------------------------------
# diagram automorphisms
# ---------------------------------------------------------------------------

@dataclass
class Automorphism:
    """A permutation of the simple roots and the automorphism it induces."""

    group: RootedGroup
    label_perm: Tuple[int, ...]
    root_perm: List[int] = field(init=False)
    element_perm: List[int] = field(init=False)

    def __post_init__(self):
        g = self.group
        p = tuple(self.label_perm)
        if sorted(p) != list(range(g.rank)):
            raise ValidationError("automorphism must permute the simple roots")
        self.label_perm = p
        cartan = getattr(g, "cartan", None)
        if cartan is not None:
            a = cartan.matrix
            if any(a[p[i]][p[j]] != a[i][j] for i in range(g.rank) for j in range(g.rank)):
                raise ValidationError("permutation does not preserve the Cartan matrix")
        rp = []
        for v in g.roots:
            w = [0] * g.rank
            for i, c in enumerate(v):
                w[p[i]] = c
            w = tuple(w)
            if w not in g.root_index:
                raise ValidationError("permutation does not preserve the root system")
            rp.append(g.root_index[w])
        self.root_perm = rp
        sigma = np.asarray(rp, dtype=np.int32)
        sigma_inv = np.argsort(sigma).astype(np.int32)
        images = sigma[g.perms][:, sigma_inv]
        self.element_perm = [g.index_of_perm(row) for row in images]

    def __call__(self, w: int) -> int:
        return self.element_perm[w]

    @cached_property
    def order(self) -> int:
        k, p = 1, self.label_perm
        ident = tuple(range(len(p)))
        cur = p
        while cur != ident:
            cur = tuple(p[i] for i in cur)
            k += 1
        return k

    @classmethod
    def identity(cls, g: RootedGroup) -> "Automorphism":
        return cls(g, tuple(range(g.rank)))

    def is_identity(self) -> bool:
        return self.label_perm == tuple(range(len(self.label_perm)))


def apply_automorphism(g: RootedGroup, a: Automorphism, w: int) -> int:
    if a.group is not g:
        raise ValidationError("automorphism belongs to another group")
    return a.element_perm[w]


def relative_automorphism(rel: RelativeWeylGroup, a: Automorphism) -> Automorphism:
    """The automorphism of W_G(L) induced by a diagram automorphism stabilising Delta_L."""
    p = a.label_perm
    if sorted(p[i] for i in rel.levi.simple) != list(rel.levi.simple):
        raise ValidationError("automorphism does not stabilise the Levi subsystem")
    cbar = rel.levi.complement
    q = tuple(cbar.index(p[i]) for i in cbar)
    return Automorphism(rel.group, q)


def diagram_automorphisms(g: CoxeterGroupTable) -> List[Tuple[int, ...]]:
    """All permutations of the simple roots preserving the Cartan matrix."""
    from itertools import permutations
    a = g.cartan.matrix
    n = g.rank
    out = []
    for p in permutations(range(n)):
        if all(a[p[i]][p[j]] == a[i][j] for i in range(n) for j in range(n)):
            out.append(p)
    return out
