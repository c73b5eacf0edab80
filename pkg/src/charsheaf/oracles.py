"""Independent reference computations used to cross-check the main algorithms.

Each oracle deliberately avoids the code paths it is compared against: groups
are rebuilt from reflection matrices, character tables come from exact
eigenvectors of class-multiplication matrices, Molien series are summed
element by element, Kostka-Foulkes polynomials come from the charge statistic,
and flag counts come from enumerating subspaces of F_q^n.
"""

from fractions import Fraction
from itertools import product
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np
import sympy

Mat = Tuple[Tuple[int, ...], ...]


# ---------------------------------------------------------------------------
# groups from reflection matrices
# ---------------------------------------------------------------------------

def reflection_matrices(cartan: Sequence[Sequence[int]]) -> List[Mat]:
    """s_i(alpha_j) = alpha_j - a_ij alpha_i, columns are images of simple roots."""
    n = len(cartan)
    out = []
    for i in range(n):
        m = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
        for j in range(n):
            m[i][j] -= cartan[i][j]
        out.append(tuple(tuple(r) for r in m))
    return out


class MatrixGroup:
    """A finite group of integer matrices, enumerated by closure."""

    def __init__(self, generators: Sequence[Mat]):
        gens = [np.array(g, dtype=np.int64) for g in generators]
        n = gens[0].shape[0] if gens else 0
        ident = np.eye(n, dtype=np.int64)
        key = lambda m: tuple(tuple(int(x) for x in r) for r in m)
        elems = {key(ident): ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for s in gens:
                    p = s @ m
                    k = key(p)
                    if k not in elems:
                        elems[k] = p
                        nxt.append(p)
            frontier = nxt
        self.keys = sorted(elems)
        self.index = {k: i for i, k in enumerate(self.keys)}
        self.mats = [elems[k] for k in self.keys]
        self.gens = [key(g) for g in gens]
        self.order = len(self.keys)
        self._key = key
        self.identity = self.index[key(ident)]

    def mul(self, a: int, b: int) -> int:
        return self.index[self._key(self.mats[a] @ self.mats[b])]

    def inv(self, a: int) -> int:
        inv = np.rint(np.linalg.inv(self.mats[a])).astype(np.int64)
        return self.index[self._key(inv)]

    def classes(self) -> List[List[int]]:
        seen = set()
        out = []
        invs = [self.inv(x) for x in range(self.order)]
        for x in range(self.order):
            if x in seen:
                continue
            cl = sorted({self.mul(self.mul(y, x), invs[y]) for y in range(self.order)})
            seen.update(cl)
            out.append(cl)
        return out

    def length(self, a: int) -> int:
        """Word length in the generators, by breadth-first search."""
        if not hasattr(self, "_lengths"):
            dist = {self.identity: 0}
            frontier = list(dist)
            gi = [self.index[g] for g in self.gens]
            while frontier:
                nxt = []
                for x in frontier:
                    for s in gi:
                        y = self.mul(s, x)
                        if y not in dist:
                            dist[y] = dist[x] + 1
                            nxt.append(y)
                frontier = nxt
            self._lengths = dist
        return self._lengths[a]


# ---------------------------------------------------------------------------
# character tables by exact eigenvectors (Burnside)
# ---------------------------------------------------------------------------

def burnside_table(G: MatrixGroup) -> Tuple[List[List[int]], List[List[Fraction]]]:
    """Classes and the character table, from simultaneous eigenvectors of class sums.

    Returns (classes, rows) with rows[k][j] the value of the k-th irreducible on
    class j.  The decomposition of the regular character is verified.
    """
    classes = G.classes()
    r = len(classes)
    class_of = {}
    for j, cl in enumerate(classes):
        for x in cl:
            class_of[x] = j
    # coefficient matrices M_j[k][l] = #{(x, y) : x in C_j, y in C_k, xy = fixed z in C_l}
    mats = []
    for j in range(r):
        M = [[0] * r for _ in range(r)]
        for l in range(r):
            z = classes[l][0]
            for x in classes[j]:
                y = G.mul(G.inv(x), z)
                M[class_of[y]][l] += 1
        mats.append(sympy.Matrix(M))
    weights = [3 ** j + 1 for j in range(r)]
    combo = sum((w * m for w, m in zip(weights, mats)), sympy.zeros(r, r))
    sizes = [len(c) for c in classes]
    e = class_of[G.identity]
    rows = []
    for _, _, vecs in combo.eigenvects():
        for v in vecs:
            v = v / v[e]
            omega = list(v)
            # omega_j = |C_j| chi(g_j) / chi(1);  chi(1)^2 = |G| / sum_j omega_j conj(omega_j) / |C_j|
            inv = [class_of[G.inv(c[0])] for c in classes]
            s = sum(sympy.nsimplify(omega[j] * omega[inv[j]]) / sizes[j] for j in range(r))
            deg = sympy.sqrt(sympy.Rational(G.order) / s)
            row = [sympy.nsimplify(deg * omega[j] / sizes[j]) for j in range(r)]
            rows.append(row)
    if len(rows) != r:
        raise AssertionError("class sums are not simultaneously diagonalisable with simple spectrum")
    out = []
    for row in rows:
        vals = []
        for x in row:
            if not x.is_rational:
                raise AssertionError("irrational character value in a Weyl group")
            vals.append(Fraction(int(x.p), int(x.q)))
        out.append(vals)
    reg = [G.order if j == e else 0 for j in range(r)]
    for j in range(r):
        if sum(row[e] * row[j] for row in out) != reg[j]:
            raise AssertionError("regular character is not the sum of deg * chi")
    return classes, out


# ---------------------------------------------------------------------------
# Molien series element by element
# ---------------------------------------------------------------------------

def molien_elementwise(G: MatrixGroup, values: Sequence, order: int) -> List[Fraction]:
    """(1/|G|) sum_g chi(g^-1) / det(1 - t g), expanded to t^order, one element at a time.

    ``values[x]`` is chi at element x of G.
    """
    t = sympy.Symbol("t")
    total = [Fraction(0)] * (order + 1)
    n = G.mats[0].shape[0]
    for x in range(G.order):
        c = values[G.inv(x)]
        if not c:
            continue
        det = sympy.Poly((sympy.eye(n) - t * sympy.Matrix(G.mats[x].tolist())).det(), t)
        coeffs = [Fraction(int(a)) for a in reversed(det.all_coeffs())]
        coeffs += [Fraction(0)] * (order + 1)
        inv = [Fraction(0)] * (order + 1)
        inv[0] = 1 / coeffs[0]
        for k in range(1, order + 1):
            inv[k] = -sum(coeffs[i] * inv[k - i] for i in range(1, k + 1)) / coeffs[0]
        for k in range(order + 1):
            total[k] += Fraction(c) * inv[k]
    return [v / G.order for v in total]


# ---------------------------------------------------------------------------
# normalisers
# ---------------------------------------------------------------------------

def parabolic_elements(G: MatrixGroup, simple: Sequence[int]) -> List[int]:
    gens = [G.index[G.gens[i]] for i in simple]
    elems = {G.identity}
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = G.mul(s, x)
                if y not in elems:
                    elems.add(y)
                    nxt.append(y)
        frontier = nxt
    return sorted(elems)


def normalizer(G: MatrixGroup, sub: Sequence[int]) -> List[int]:
    s = set(sub)
    return [x for x in range(G.order)
            if {G.mul(G.mul(x, h), G.inv(x)) for h in sub} == s]


# ---------------------------------------------------------------------------
# Kostka-Foulkes polynomials from the charge statistic
# ---------------------------------------------------------------------------

def semistandard_tableaux(shape: Sequence[int], content: Sequence[int]) -> List[List[List[int]]]:
    """All SSYT of the given shape and content (rows weakly increase, columns strictly)."""
    cells = [(r, c) for r, L in enumerate(shape) for c in range(L)]
    letters = []
    for v, m in enumerate(content, start=1):
        letters += [v] * m
    if len(letters) != len(cells):
        return []
    out = []

    def fill(k, tab, remaining):
        if k == len(cells):
            out.append([row[:] for row in tab])
            return
        r, c = cells[k]
        for v in sorted(set(remaining)):
            if c > 0 and tab[r][c - 1] > v:
                continue
            if r > 0 and tab[r - 1][c] >= v:
                continue
            tab[r].append(v)
            rem = list(remaining)
            rem.remove(v)
            fill(k + 1, tab, rem)
            tab[r].pop()

    fill(0, [[] for _ in shape], letters)
    return out


def charge(word: Sequence[int]) -> int:
    """Lascoux-Schutzenberger charge of a word with partition content."""
    w = list(word)
    total = 0
    while w:
        n = len(w)
        top = max(w)
        chosen = []
        pos = n
        for letter in range(1, top + 1):
            found = None
            for step in range(1, n + 1):
                p = (pos - step) % n
                if w[p] == letter and p not in chosen:
                    found = p
                    break
            if found is None:
                break
            chosen.append(found)
            pos = found
        index = 0
        for k in range(1, len(chosen)):
            if chosen[k] > chosen[k - 1]:
                index += 1
            total += index
        w = [x for i, x in enumerate(w) if i not in set(chosen)]
    return total


def kostka_foulkes(lam: Sequence[int], mu: Sequence[int]) -> Dict[int, int]:
    """K_{lam, mu}(q) as {exponent: coefficient}."""
    out: Dict[int, int] = {}
    for T in semistandard_tableaux(lam, mu):
        word = [x for row in reversed(T) for x in row]
        c = charge(word)
        out[c] = out.get(c, 0) + 1
    return out


# ---------------------------------------------------------------------------
# unipotent classes of GL_n
# ---------------------------------------------------------------------------

def jordan_matrix(lam: Sequence[int], eigenvalue: int = 0) -> List[List[int]]:
    n = sum(lam)
    m = [[0] * n for _ in range(n)]
    start = 0
    for part in lam:
        for i in range(part):
            m[start + i][start + i] = eigenvalue
            if i + 1 < part:
                m[start + i][start + i + 1] = 1
        start += part
    return m


def centralizer_dimension(lam: Sequence[int]) -> int:
    """dim ker ad(x) on n x n matrices for the nilpotent Jordan form x of type lam."""
    n = sum(lam)
    x = sympy.Matrix(jordan_matrix(lam))
    rows = []
    for i in range(n):
        for j in range(n):
            e = sympy.zeros(n, n)
            e[i, j] = 1
            rows.append(list(x * e - e * x))
    A = sympy.Matrix(rows).T
    return n * n - A.rank()


def fixed_flag_count(lam: Sequence[int], q: int) -> int:
    """Number of complete flags of F_q^n stable under the unipotent Jordan matrix of type lam."""
    if not sympy.isprime(q):
        raise ValueError("the flag oracle works over prime fields")
    n = sum(lam)
    u = np.array(jordan_matrix(lam, 1), dtype=np.int64)
    vectors = [np.array(v, dtype=np.int64) for v in product(range(q), repeat=n)]
    key = lambda v: tuple(int(a) % q for a in v)

    def span_with(space: FrozenSet, v) -> FrozenSet:
        out = set(space)
        for s in space:
            for c in range(1, q):
                out.add(key(np.array(s) + c * v))
        return frozenset(out)

    def stable(space: FrozenSet) -> bool:
        return all(key(u @ np.array(s)) in space for s in space)

    memo: Dict[FrozenSet, int] = {}

    def count(space: FrozenSet, dim: int) -> int:
        if dim == n:
            return 1
        if space in memo:
            return memo[space]
        children = set()
        for v in vectors:
            if key(v) in space:
                continue
            bigger = span_with(space, v)
            if stable(bigger):
                children.add(bigger)
        total = sum(count(c, dim + 1) for c in children)
        memo[space] = total
        return total

    return count(frozenset([tuple([0] * n)]), 0)


# ---------------------------------------------------------------------------
# coset induction by direct double summation
# ---------------------------------------------------------------------------

def coset_induce_direct(mul, inv, phi: Sequence[int], order: int, sub_elements: Sequence[int],
                        f: Dict[int, object], H_order: int) -> Dict[int, object]:
    """Ind from H.phi g to G.phi as a dict on G, summing over all y in G."""
    member = set(sub_elements)
    out = {}
    for x in range(order):
        total = Fraction(0)
        for y in range(order):
            z = mul(mul(inv(y), x), phi[y])
            if z in member:
                total += f[z]
        out[x] = total / H_order
    return out


def coset_inner_direct(a: Dict[int, object], b: Dict[int, object], elements: Sequence[int], H_order: int):
    from .arith import conj, simplify
    total = 0
    for x in elements:
        total += a[x] * conj(b[x])
    return simplify(total * Fraction(1, H_order))


# ---------------------------------------------------------------------------
# explicit tensor construction for refl (x) refl on S3 x S3 with the swap
# ---------------------------------------------------------------------------

def swap_tensor_trace(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> int:
    """trace((A (x) B) o P) where P swaps the two tensor factors."""
    A = np.array(A, dtype=np.int64)
    B = np.array(B, dtype=np.int64)
    n = A.shape[0]
    P = np.zeros((n * n, n * n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            P[j * n + i, i * n + j] = 1
    return int(np.trace(np.kron(A, B) @ P))
