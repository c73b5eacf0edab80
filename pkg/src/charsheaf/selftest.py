"""The acceptance suite: ten criteria, each checked against an independent oracle.

``run_all`` returns one ``CriterionResult`` per criterion; a criterion passes
when its checks succeed within its time limit.
"""

import time
import traceback
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence

import sympy

from . import oracles
from .arith import LaurentPoly, simplify
from .chartab import ClassFunction, character_table
from .coset import (Coset, CosetClassFunction, ExtendedGroup, b_preferred_character, coset_induce,
                    coset_inner_product, coset_restrict, cyclic_product_setting, extend_character,
                    extension_characters, inner_automorphism, is_phi_stable, transport_ambient, transport_psi_g,
                    twisted_classes)
from .coxeter import (Automorphism, FiniteGroup, build_group, levi, minimal_coset_rep, reflection_subgroup,
                      relative_weyl_group, right_cosets)
from .green import check_solution, green_for_blocks, green_transition, ordered_pairs, x_from_y
from .molien import b_invariant, coset_molien_series, j_induce, molien_series
from .springer import load_fixture, parse_partition, typeA_springer_block

TEST_GROUPS = ("A1", "A2", "B2", "G2", "A3")
FIXTURES = ("b2_springer", "c2_springer", "c2_levi_a1", "g2_springer", "g2_cuspidal")


class CriterionFailure(AssertionError):
    pass


def require(cond, msg: str):
    if not cond:
        raise CriterionFailure(msg)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    limit: Optional[float]
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        limit = f" / limit {self.limit:g} s" if self.limit else ""
        return f"{status} criterion {self.number:2d} {self.name}: {self.seconds:.2f} s{limit}; {self.detail}"


def _oracle_group(g):
    return oracles.MatrixGroup(oracles.reflection_matrices(g.cartan.matrix))


def _to_oracle(g, G) -> List[int]:
    """Oracle index of each element of g, matched through the reflection matrices."""
    return [G.index[tuple(tuple(int(x) for x in row) for row in g.matrix(w))] for w in range(g.order)]


# ---------------------------------------------------------------------------
# 1. character tables
# ---------------------------------------------------------------------------

def criterion_character_tables() -> str:
    for label in TEST_GROUPS:
        g = build_group(label)
        table = character_table(g)
        G = _oracle_group(g)
        classes, rows = oracles.burnside_table(G)
        to_o = _to_oracle(g, G)
        cls_of = {x: j for j, cl in enumerate(classes) for x in cl}
        perm = [cls_of[to_o[c.representative]] for c in g.classes]
        require(sorted(perm) == list(range(len(classes))), f"{label}: class structures differ")
        ours = sorted(tuple(simplify(v) for v in chi.values) for chi in table)
        theirs = sorted(tuple(simplify(row[perm[j]]) for j in range(len(perm))) for row in rows)
        require(ours == theirs, f"{label}: character tables differ")
    return f"{len(TEST_GROUPS)} tables equal to the Burnside oracle"


# ---------------------------------------------------------------------------
# 2. relative Weyl groups
# ---------------------------------------------------------------------------

def _subsets(n: int):
    for k in range(n + 1):
        yield from combinations(range(n), k)


def criterion_relative_weyl() -> str:
    count = 0
    for label in ("A3", "B2", "G2"):
        g = build_group(label)
        G = _oracle_group(g)
        to_o = _to_oracle(g, G)
        for J in _subsets(g.rank):
            rel = relative_weyl_group(g, levi(g, J))
            WL = oracles.parabolic_elements(G, J)
            N = set(oracles.normalizer(G, WL))
            wl = set(WL)
            emb = [to_o[w] for w in rel.embedding]
            require(all(x in N for x in emb), f"{label} {J}: element outside the normaliser")
            cosets = {frozenset(G.mul(x, h) for h in WL) for x in emb}
            require(len(cosets) == rel.order and rel.order * len(WL) == len(N),
                    f"{label} {J}: not a transversal of N/W_L")
            R = rel.group
            for x in range(R.order):
                for y in range(R.order):
                    prod = G.mul(emb[x], emb[y])
                    require(G.mul(G.inv(emb[R.mul(x, y)]), prod) in wl, f"{label} {J}: not a homomorphism")
            cbar = rel.levi.complement
            for a in cbar:
                M = tuple(sorted(J + (a,)))
                NM = [x for x in oracles.parabolic_elements(G, M) if x in N]
                k = cbar.index(a)
                if len(NM) == 2 * len(WL):
                    require(k in rel.coxeter_generators, f"{label} {J}: s_L,alpha missing for {a}")
                    s = rel.coxeter_generators[k]
                    require(emb[s] in NM and emb[s] not in wl, f"{label} {J}: s_L,alpha in the wrong coset")
                    col = [R.matrix(s)[i][k] for i in range(len(cbar))]
                    require(col == [-1 if i == k else 0 for i in range(len(cbar))],
                            f"{label} {J}: s_L,alpha does not negate alpha modulo V_L")
                else:
                    require(len(NM) == len(WL) and k not in rel.coxeter_generators,
                            f"{label} {J}: unexpected generator for {a}")
            count += 1
    return f"{count} standard Levis match N_W(W_L)/W_L with matched generators"


# ---------------------------------------------------------------------------
# 3. minimal coset representatives
# ---------------------------------------------------------------------------

def criterion_minimal_cosets() -> str:
    checked = 0
    for label in ("B2", "G2"):
        g = build_group(label)
        G = _oracle_group(g)
        to_o = _to_oracle(g, G)
        refl = list(g.reflections)
        subgroups = {}
        for k in range(len(refl) + 1):
            for subset in combinations(refl, k):
                elems = frozenset(g.closure(list(subset)))
                if elems not in subgroups:
                    subgroups[elems] = [x for x in refl if x in elems]
        for elems, gens in subgroups.items():
            R = reflection_subgroup(g, gens)
            psi = [g.roots[k] for k in R.psi_positive]
            for coset in right_cosets(g, R.elements):
                lengths = {x: G.length(to_o[x]) for x in coset}
                best = min(lengths.values())
                shortest = [x for x in coset if lengths[x] == best]
                require(len(shortest) == 1, f"{label}: minimum length not unique")
                positive = [x for x in coset
                            if all(all(c >= 0 for c in _apply(g.matrix(x), v)) for v in psi)]
                require(positive == shortest, f"{label}: positivity characterisation fails")
                require(minimal_coset_rep(g, R, coset) == shortest[0], f"{label}: minimal_coset_rep disagrees")
                checked += 1
    return f"{checked} cosets of all reflection subgroups checked"


def _apply(m, v):
    return [sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(m))]


# ---------------------------------------------------------------------------
# 4. Molien series and b-invariants
# ---------------------------------------------------------------------------

def criterion_molien() -> str:
    total = 0
    for label in TEST_GROUPS:
        g = build_group(label)
        G = _oracle_group(g)
        to_o = _to_oracle(g, G)
        back = {o: w for w, o in enumerate(to_o)}
        table = character_table(g)
        order = len(g.reflections) + 1
        sums = [Fraction(0)] * (order + 1)
        for chi in table:
            prof = molien_series(chi, g, order)
            vals = [chi(back[x]) for x in range(G.order)]
            ref = oracles.molien_elementwise(G, vals, order)
            require(list(prof.coefficients) == [simplify(c) for c in ref], f"{label}: Molien series differ")
            gamma, b = b_invariant(chi, g)
            k = next(i for i, c in enumerate(ref) if c)
            require((gamma, b) == (ref[k], k), f"{label}: (gamma, b) differs from the oracle")
            for i, c in enumerate(ref):
                sums[i] += chi.degree * c
            total += 1
        sign = ClassFunction.from_element_function(g, lambda w: (-1) ** g.length(w))
        require(b_invariant(sign, g)[1] == g.npos, f"{label}: b(sign) differs from the number of positive roots")
        r = g.rank
        expected = [sympy.binomial(i + r - 1, r - 1) for i in range(order + 1)]
        require([int(c) for c in sums] == [int(e) for e in expected] and all(c.denominator == 1 for c in sums),
                f"{label}: sum of chi(1) P_chi is not (1-t)^-r")
    return f"{total} characters agree with the element-by-element Molien sum"


# ---------------------------------------------------------------------------
# 5. j-induction of sign characters
# ---------------------------------------------------------------------------

def criterion_j_induction() -> str:
    count = 0
    for label in ("B2", "G2"):
        g = build_group(label)
        table = character_table(g)
        for J in _subsets(g.rank):
            L = levi(g, J)
            sub = g.subgroup(L.elements, name="W_L")
            sgn = ClassFunction.from_element_function(sub.group, lambda h: (-1) ** g.length(sub.embedding[h]))
            psi = j_induce(sub, sgn, g, table)
            npos_L = sum(1 for k in L.roots if g.is_positive(k))
            require(b_invariant(psi, g)[1] == npos_L, f"{label} {J}: b of j-induced sign is not #Phi_L^+")
            count += 1
    return f"{count} Levis: j(sign) exists, is unique and has b = #Phi_L^+"


# ---------------------------------------------------------------------------
# 6. j-induction to the extended group equals the b-preferred extension
# ---------------------------------------------------------------------------

def criterion_prime_cyclic() -> str:
    count = 0
    for factor in ("A1", "A2"):
        cp = cyclic_product_setting(factor, tuple(range(build_group(factor).rank)), 2)
        eg = cp.extended
        G = cp.group
        for chi in character_table(G):
            if not is_phi_stable(chi, eg.phi_perm):
                continue
            j = j_induce(eg.base_subgroup(), chi, V=eg, U=G)
            bp = b_preferred_character(chi, eg)
            require(j == bp, f"{factor}^2: j-induction differs from the b-preferred extension")
            for psi in extension_characters(chi, eg):
                coset_molien_series(psi, eg)
            count += 1
    return f"{count} stable characters: j-induction = b-preferred, coset Molien split exact"


# ---------------------------------------------------------------------------
# 7. coset algebra
# ---------------------------------------------------------------------------

def coset_fixtures():
    """(name, group, phi, extended group, exhaustive) for groups of order at most 72."""
    out = []
    for name, factor in (("A1xA1 swap", "A1"), ("A2xA2 swap", "A2")):
        cp = cyclic_product_setting(factor, tuple(range(build_group(factor).rank)), 2)
        out.append((name, cp.group, cp.automorphism.element_perm, cp.extended, factor == "A1"))
    for name, label, perm in (("A2 flip", "A2", (1, 0)), ("A3 flip", "A3", (2, 1, 0))):
        g = build_group(label)
        a = Automorphism(g, perm)
        out.append((name, g, a.element_perm, ExtendedGroup.from_automorphism(a), label == "A2"))
    g = build_group("A2")
    phi = inner_automorphism(g, g.generators[0])
    out.append(("S3 inner twist", g, phi, ExtendedGroup(g, phi), True))
    return out


def _parabolic_like(G: FiniteGroup) -> List[List[int]]:
    subs = [[0]]
    for J in _subsets(len(G.generators)):
        if J:
            subs.append(G.closure([G.generators[i] for i in J]))
    uniq = []
    for s in subs:
        s = sorted(s)
        if s not in uniq:
            uniq.append(s)
    return uniq


def _indicator(coset: Coset, k: int) -> CosetClassFunction:
    return CosetClassFunction(coset, [1 if i == k else 0 for i in range(len(coset.orbits))])


def criterion_coset_algebra() -> str:
    stats = {"groups": 0, "reciprocity": 0, "transport": 0}
    for name, G, phi, eg, exhaustive in coset_fixtures():
        stats["groups"] += 1
        require(G.order <= 72, f"{name}: fixture too large")
        table = character_table(G)
        stable = [chi for chi in table if is_phi_stable(chi, phi)]
        tc = twisted_classes(G, phi, 1)
        require(len(stable) == len(tc), f"{name}: #stable irreducibles != #phi-classes")
        ambient = Coset(G, phi)
        exts = [extend_character(chi, eg)[0] for chi in stable]
        exts = [CosetClassFunction(ambient, e.values) for e in exts]
        for i, a in enumerate(exts):
            for j, b in enumerate(exts):
                require(coset_inner_product(a, b) == (1 if i == j else 0), f"{name}: extensions not orthonormal")
        require(len(exts) == len(ambient.orbits), f"{name}: extensions do not span Cent(G.phi)")
        for i in range(eg.n):
            tci = twisted_classes(G, eg.phi_perm, i)
            for rep in tci.representatives:
                cls = {y for y in range(G.order) if tci.class_of[y] == tci.class_of[rep]}
                target = eg.class_of[eg.element(rep, i)]
                full = {y for y in range(G.order) if eg.class_of[eg.element(y, i)] == target}
                require(cls <= full, f"{name}: a phi^{i}-class leaves its G~-class")
                if i == 1:
                    require(cls == full, f"{name}: phi-class and G~-class differ")
        elements = range(G.order) if exhaustive else [0] + list(G.generators)
        for H in _parabolic_like(G):
            for g in elements:
                try:
                    sub = Coset(G, phi, H, g)
                except Exception:
                    continue
                for k in range(len(sub.orbits)):
                    f = _indicator(sub, k)
                    ind = coset_induce(f, ambient)
                    direct = oracles.coset_induce_direct(G.mul, G.inv, phi, G.order, sub.elements,
                                                         {x: f(x) for x in sub.elements}, len(H))
                    require(all(ind(x) == direct[x] for x in range(G.order)), f"{name}: coset induction differs")
                    for F in exts:
                        lhs = coset_inner_product(ind, F)
                        rhs = coset_inner_product(f, coset_restrict(F, sub))
                        require(lhs == rhs, f"{name}: coset Frobenius reciprocity fails")
                        stats["reciprocity"] += 1
                    tf = transport_psi_g(f)
                    require(coset_inner_product(tf, tf) == coset_inner_product(f, f), f"{name}: transport not isometric")
                    lhs = transport_ambient(ind, g)
                    rhs = coset_induce(tf, Coset(G, tf.coset.phi))
                    require(lhs == rhs, f"{name}: transport does not intertwine induction")
                    stats["transport"] += 1
    return (f"{stats['groups']} fixtures, {stats['reciprocity']} reciprocity checks, "
            f"{stats['transport']} transport checks")


# ---------------------------------------------------------------------------
# 8. Lusztig-Shoji solver
# ---------------------------------------------------------------------------

def criterion_green() -> str:
    entries = 0
    for n in (2, 3, 4):
        block = typeA_springer_block(n)
        gt = green_transition(block, "kostka")
        parts = [parse_partition(l.split(":")[0]) for l in gt.labels]
        for i, mu in enumerate(parts):
            for j, lam in enumerate(parts):
                ref = LaurentPoly.from_dict(oracles.kostka_foulkes(lam, mu), "q")
                require(gt.P[i][j] == ref, f"GL{n}: P[{gt.labels[i]}][{gt.labels[j]}] = {gt.P[i][j]}, expected {ref}")
                entries += 1
        check_solution(gt.omega, gt.P, gt.Lam, gt.a_values)
    solved = 0
    for name in FIXTURES:
        block = load_fixture(name)
        for norm in ("kostka", "stalk"):
            gt = green_transition(block, norm)
            check_solution(gt.omega, gt.P, gt.Lam, gt.a_values)
            solved += 1
    green_for_blocks([load_fixture("c2_springer"), load_fixture("c2_levi_a1")], "stalk")
    return f"{entries} Kostka-Foulkes entries match; {solved} fixture systems re-multiply exactly"


# ---------------------------------------------------------------------------
# 9. split untwisted assembly for GL_n
# ---------------------------------------------------------------------------

def criterion_split_gl() -> str:
    from .assembly import columns_of, sheaf_value_table, stabilizer_coset_data, y_table, BonnafeCharacter, \
        FrobeniusDatum
    checks = 0
    for n in (2, 3):
        block = typeA_springer_block(n)
        fd = FrobeniusDatum.untwisted(block.group.rank)
        lsd = stabilizer_coset_data(block, frobenius=fd)
        table = sheaf_value_table(block, lsd, fd)
        gt = green_transition(block, "stalk")
        Y = y_table(lsd, BonnafeCharacter.trivial(block.relative_group), fd)
        X = x_from_y(gt.P, [[LaurentPoly.constant(v, "q") for v in row] for row in Y])
        pairs = ordered_pairs(block)
        for i, p in enumerate(pairs):
            a = block.ab(p)[0]
            scale = LaurentPoly.monomial((block.dim_G + a) // 2, (-1) ** (-a), "q")
            require((block.dim_G + a) % 2 == 0, f"GL{n}: odd exponent")
            row = table.entries[table.row_labels.index(p.label)]
            require(row == [scale * x for x in X[i]], f"GL{n}: row {p.label} differs from the X-function")
            checks += 1
        columns = columns_of(block)
        degrees = {p.label: block.correspondent(p).degree for p in pairs}
        monomials = set()
        for q in (2, 3):
            values = table.evaluate(q)
            for c, (cls, _) in enumerate(columns):
                total = sum(degrees[lab] * values[r][c] for r, lab in enumerate(table.row_labels))
                flags = oracles.fixed_flag_count(parse_partition(cls), q)
                ratio = Fraction(total) / flags
                sign = 1 if ratio > 0 else -1
                k = 0
                mag = abs(ratio)
                while mag > 1 and mag.denominator == 1 and mag % q == 0:
                    mag /= q
                    k += 1
                while mag < 1 and mag.numerator == 1 and (1 / mag) % q == 0:
                    mag *= q
                    k -= 1
                require(mag == 1, f"GL{n}, q={q}: column {cls} is not a monomial multiple of the flag count")
                monomials.add((sign, k))
                checks += 1
        require(len(monomials) == 1, f"GL{n}: the Borel comparison needs different monomials {monomials}")
    return f"{checks} rows and columns agree with the X-function and the flag count"


# ---------------------------------------------------------------------------
# 10. twisted pipeline for 2A2
# ---------------------------------------------------------------------------

def criterion_twisted_a2() -> str:
    from .assembly import FrobeniusDatum, multiplicities, sheaf_value_table, stabilizer_coset_data
    block = typeA_springer_block(3)
    twisted = FrobeniusDatum((1, 0))
    table = sheaf_value_table(block, frobenius=twisted)
    require(table.metadata["extension_convention"] == "b-preferred", "extensions are not b-preferred")
    for row in table.entries:
        for e in row:
            require(e.var == "q" and e.is_polynomial() and e.is_integral(), f"entry {e} is not an integer polynomial")
    m_tw = multiplicities(stabilizer_coset_data(block, frobenius=twisted))
    m_id = multiplicities(stabilizer_coset_data(block))
    pairs = ordered_pairs(block)
    for r, k in enumerate(m_tw.rows):
        E = block.table[k]
        i = next(i for i, p in enumerate(pairs) if block.correspondent(p) == E)
        require(m_tw.values[r][i] == m_id.values[m_id.rows.index(k)][i],
                f"multiplicity at ({pairs[i].label}, {pairs[i].label}) changes under the twist")
    return f"{len(table.row_labels)} x {len(table.column_labels)} table, diagonal multiplicities match the split case"


CRITERIA = [
    (1, "character tables", 5.0, criterion_character_tables),
    (2, "relative Weyl groups", 5.0, criterion_relative_weyl),
    (3, "minimal coset representatives", None, criterion_minimal_cosets),
    (4, "Molien series and b-invariants", None, criterion_molien),
    (5, "j-induction of sign", None, criterion_j_induction),
    (6, "prime cyclic products", 10.0, criterion_prime_cyclic),
    (7, "coset algebra", None, criterion_coset_algebra),
    (8, "Lusztig-Shoji solver", 30.0, criterion_green),
    (9, "split GL_n assembly", 60.0, criterion_split_gl),
    (10, "twisted 2A2 pipeline", None, criterion_twisted_a2),
]


def run_criterion(number: int) -> CriterionResult:
    for num, name, limit, fn in CRITERIA:
        if num == number:
            start = time.perf_counter()
            try:
                detail = fn()
                ok = True
            except Exception as exc:
                detail = f"{type(exc).__name__}: {exc}"
                ok = False
                if not isinstance(exc, CriterionFailure):
                    detail += " | " + traceback.format_exc().strip().splitlines()[-2].strip()
            seconds = time.perf_counter() - start
            if ok and limit is not None and seconds > limit:
                ok = False
                detail = f"exceeded time limit ({detail})"
            return CriterionResult(num, name, ok, seconds, limit, detail)
    raise ValueError(f"no criterion {number}")


def run_all(numbers: Sequence[int] = None) -> List[CriterionResult]:
    numbers = numbers or [c[0] for c in CRITERIA]
    return [run_criterion(k) for k in numbers]
