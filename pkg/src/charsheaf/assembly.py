"""Values of character sheaves at split unipotent representatives.

For a block with relative Weyl group W = W_G(L), a local system on the cuspidal
support is described by its stabiliser H = W_G(L, LL) <= W and the set Z of
elements twisting it into its Frobenius image, a union of cosets x.H.  The
element w with w^-1 in Z of minimal length (relative to the reflection part of
H) fixes the sub-coset H.F w^-1 of W.F, and a character sheaf A is labelled by
a sigma-stable E in Irr(H) together with an extension E~ to that coset.  Its
characteristic function at the split representative u_a is

    sum over iota, iota' of  m(A, iota) (-1)^{a_iota} q^{(dim G + a_iota)/2} P_{iota', iota} Y_{iota'}(u_a)

with m(A, iota) = <E~_iota, Ind_{H.F w^-1}^{W.F} E~> and Y_{iota'}(u_a) =
+-gamma(F(w)) chi_{iota'}(a) on the class of iota' and 0 elsewhere.  P is the
stalk-normalised solution of the Lusztig-Shoji system (see ``green``).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .arith import LaurentPoly, ParityError, scalar_str, simplify
from .chartab import ClassFunction, character_table
from .coset import (Coset, CosetClassFunction, ExtendedGroup, b_preferred_character, coset_induce,
                    coset_inner_product, coset_restriction, is_phi_stable, transport_ambient, transport_psi_g)
from .coxeter import (Automorphism, ReflectionSubgroupDatum, Subgroup, minimal_coset_rep, reflection_subgroup,
                      relative_automorphism)
from .errors import InconsistencyError, ValidationError
from .green import GreenTransition, green_transition, ordered_pairs, x_from_y
from .molien import MatrixRepresentation
from .springer import BlockDatum, GSpringerPair, dump_json

EXTENSION_CONVENTIONS = ("b-preferred", "user")

Q_HALF_ONE = LaurentPoly.constant(1, "q½")
Q_HALF_ZERO = LaurentPoly((), 0, "q½")


# ---------------------------------------------------------------------------
# Frobenius and Bonnafe data
# ---------------------------------------------------------------------------

@dataclass
class FrobeniusDatum:
    """The diagram automorphism sigma (a permutation of simple-root indices) and q."""

    sigma: Tuple[int, ...]
    q: Union[int, str] = "symbolic"
    split: bool = True

    def __post_init__(self):
        self.sigma = tuple(self.sigma)
        if self.q != "symbolic":
            if not isinstance(self.q, int) or self.q < 2:
                raise ValidationError("q must be an integer prime power >= 2 or 'symbolic'")
        if self.split and not self.is_trivial:
            self.split = False

    @classmethod
    def untwisted(cls, rank: int, q: Union[int, str] = "symbolic") -> "FrobeniusDatum":
        return cls(tuple(range(rank)), q, True)

    @property
    def is_trivial(self) -> bool:
        return self.sigma == tuple(range(len(self.sigma)))

    def ambient(self, block: BlockDatum) -> Automorphism:
        if len(self.sigma) != block.group.rank:
            raise ValidationError("sigma does not match the rank of the group")
        return Automorphism(block.group, self.sigma)

    def relative(self, block: BlockDatum) -> Automorphism:
        """sigma acting on W_G(L) through the quotient root system; must stabilise the Levi."""
        return relative_automorphism(block.relative, self.ambient(block))


@dataclass
class BonnafeCharacter:
    """A linear character gamma of W_G(L) with a declared source."""

    character: ClassFunction
    source: Optional[str]

    def __post_init__(self):
        g = self.character.group
        if self.character.degree != 1:
            raise ValidationError("gamma must take the value 1 at the identity")
        for x in g.generators:
            for y in range(g.order):
                if self.character(g.mul(x, y)) != self.character(x) * self.character(y):
                    raise ValidationError("gamma is not a linear character")
        if self.source is None and not self.is_trivial:
            raise ValidationError("a nontrivial gamma needs a declared data source")

    @classmethod
    def trivial(cls, group) -> "BonnafeCharacter":
        return cls(ClassFunction(group, [1] * len(group.classes)), "trivial")

    @property
    def is_trivial(self) -> bool:
        return all(v == 1 for v in self.character.values)

    def __call__(self, w: int):
        return self.character(w)


# ---------------------------------------------------------------------------
# stabiliser cosets
# ---------------------------------------------------------------------------

@dataclass
class LocalSystemDatum:
    block: BlockDatum
    sigma: Automorphism
    stabilizer: List[int]
    reflection: ReflectionSubgroupDatum
    Z: List[int]
    minimal_reps: List[int]
    w_inv: int

    @property
    def W(self):
        return self.block.relative_group

    @property
    def w(self) -> int:
        return self.W.inv(self.w_inv)

    @cached_property
    def ambient_coset(self) -> Coset:
        return Coset(self.W, self.sigma.element_perm)

    @cached_property
    def coset(self) -> Coset:
        """H.F w^-1 inside W.F."""
        return Coset(self.W, self.sigma.element_perm, self.stabilizer, self.w_inv)

    @cached_property
    def sub(self) -> Subgroup:
        return self.W.subgroup(self.stabilizer, name="W_G(L,LL)")

    @cached_property
    def twisted_perm(self) -> List[int]:
        """phi' = sigma o ad(w^-1) restricted to H, on indices of ``sub.group``."""
        W, s, g = self.W, self.sigma.element_perm, self.w_inv
        gi = W.inv(g)
        emb, img = self.sub.embedding, self.sub.image
        return [img[s[W.mul(W.mul(g, emb[h]), gi)]] for h in range(self.sub.group.order)]

    @cached_property
    def ambient_extended(self) -> ExtendedGroup:
        return ExtendedGroup.from_automorphism(self.sigma, name="W_G(L).F")

    @cached_property
    def sub_extended(self) -> ExtendedGroup:
        """H x| <phi'> acting on V_G/V_L through S' = S A_{w^-1}."""
        W, sub = self.W, self.sub
        r = W.rank
        eg = self.ambient_extended
        S = eg.S
        A = W.matrix(self.w_inv)
        S2 = tuple(tuple(simplify(sum(S[i][k] * A[k][j] for k in range(r))) for j in range(r)) for i in range(r))
        rep = MatrixRepresentation(sub.group, r, lambda h: W.matrix(sub.embedding[h]))
        n = _matrix_order(S2)
        return ExtendedGroup(sub.group, self.twisted_perm, n, S=S2, base_rep=rep, name="W_G(L,LL).F")

    def to_json(self) -> dict:
        W = self.W
        return {
            "block": self.block.id,
            "stabilizer_order": len(self.stabilizer),
            "reflection_subgroup_order": len(self.reflection.elements),
            "Z_size": len(self.Z),
            "w": W.word_string(self.w),
            "sigma": list(self.sigma.label_perm),
        }


def _matrix_order(S) -> int:
    r = len(S)
    ident = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
    cur, k = S, 1
    while cur != ident:
        cur = tuple(tuple(simplify(sum(cur[i][t] * S[t][j] for t in range(r))) for j in range(r)) for i in range(r))
        k += 1
        if k > 1000:
            raise InconsistencyError("sigma-twisted matrix has no finite order")
    return k


def stabilizer_coset_data(block: BlockDatum, stabilizer: Sequence[int] = None, frobenius: FrobeniusDatum = None,
                          Z: Sequence[int] = None, connected_centre: bool = True) -> LocalSystemDatum:
    """Assemble W_G(L,LL), R_G(L,LL), Z and the minimal element w^-1 of Z.

    ``stabilizer`` and ``Z`` are element sets of W_G(L) (defaults: all of W and
    Z = H).  Z must be a union of cosets x.H; each coset x.R of the reflection
    part R gets its minimal representative, and w^-1 is the shortest of them.
    """
    W = block.relative_group
    if frobenius is None:
        frobenius = FrobeniusDatum.untwisted(block.group.rank)
    sigma = frobenius.relative(block)
    H = sorted(set(stabilizer)) if stabilizer is not None else list(range(W.order))
    if not W.is_subgroup(H):
        raise ValidationError("stabilizer is not a subgroup of W_G(L)")
    Zs = sorted(set(Z)) if Z is not None else list(H)
    if not Zs:
        raise ValidationError("Z_G(L,LL) is empty; such local systems are excluded")
    zset = set(Zs)
    for x in Zs:
        if any(W.mul(x, h) not in zset for h in H):
            raise ValidationError("Z is not a union of cosets of the stabilizer")
    refl = [x for x in H if x in set(W.reflections)]
    R = reflection_subgroup(W, refl)
    if connected_centre:
        if sorted(R.elements) != H:
            raise ValidationError("with connected centre the stabilizer must be generated by reflections")
        if len(Zs) != len(H):
            raise ValidationError("with connected centre Z must be a single coset")
    reps = []
    seen = set()
    for x in Zs:
        if x in seen:
            continue
        c = sorted(W.mul(x, y) for y in R.elements)
        seen.update(c)
        reps.append(minimal_coset_rep(W, R, c))
    w_inv = min(reps, key=lambda x: (W.length(x), x))
    return LocalSystemDatum(block, sigma, H, R, Zs, reps, w_inv)


# ---------------------------------------------------------------------------
# extensions and multiplicities
# ---------------------------------------------------------------------------

def ambient_extension(lsd: LocalSystemDatum, chi: ClassFunction) -> CosetClassFunction:
    """The b-preferred extension of a sigma-stable character of W_G(L) to W.F."""
    eg = lsd.ambient_extended
    return coset_restriction(b_preferred_character(chi, eg), eg)


def sub_extension_twisted(lsd: LocalSystemDatum, E: ClassFunction) -> CosetClassFunction:
    """The b-preferred extension of E in Irr(H) on the coset H.phi' (phi' = sigma o ad w^-1)."""
    eg = lsd.sub_extended
    return coset_restriction(b_preferred_character(E, eg), eg)


def sub_extension(lsd: LocalSystemDatum, E: ClassFunction) -> CosetClassFunction:
    """The same extension read on H.F w^-1 inside W.F:  E~(h F(w^-1)) = E'(h)."""
    twisted = sub_extension_twisted(lsd, E)
    W = lsd.W
    pg = lsd.sigma.element_perm[lsd.w_inv]
    pgi = W.inv(pg)
    img = lsd.sub.image
    return CosetClassFunction.from_function(lsd.coset, lambda x: twisted(img[W.mul(x, pgi)]), check=False)


def coset_multiplicity(ext_iota: CosetClassFunction, ext_E: CosetClassFunction, lsd: LocalSystemDatum):
    """<E~_iota, Ind_{H.F w^-1}^{W.F} E~>."""
    if not ext_E.coset.same_as(lsd.coset):
        raise ValidationError("extension of E does not live on H.F w^-1")
    return coset_inner_product(ext_iota, coset_induce(ext_E, lsd.ambient_coset))


def transported_multiplicity(ext_iota: CosetClassFunction, ext_E: CosetClassFunction, lsd: LocalSystemDatum):
    """The same multiplicity computed after carrying both cosets along psi_g, g = w^-1."""
    f2 = transport_psi_g(ext_E)
    F2 = transport_ambient(ext_iota, lsd.w_inv)
    return coset_inner_product(F2, coset_induce(f2, Coset(lsd.W, f2.coset.phi)))


@dataclass
class MultiplicityData:
    rows: List[int]
    pairs: List[GSpringerPair]
    values: List[List]

    def value(self, row: int, pair: GSpringerPair):
        if pair not in self.pairs:
            return 0
        return self.values[self.rows.index(row)][self.pairs.index(pair)]


def multiplicities(lsd: LocalSystemDatum, ambient_exts: Dict[int, CosetClassFunction] = None,
                   check_transport: bool = True) -> MultiplicityData:
    """m(A_E, iota) for sigma-stable E in Irr(H) and iota in the block."""
    block = lsd.block
    pairs = ordered_pairs(block)
    W = lsd.W
    Htab = character_table(lsd.sub.group, with_b=False)
    rows = [k for k, E in enumerate(Htab) if is_phi_stable(E, lsd.twisted_perm)]
    exts = {}
    for p in pairs:
        chi = block.correspondent(p)
        if ambient_exts is not None and p.correspondent_index in ambient_exts:
            exts[p.label] = ambient_exts[p.correspondent_index]
        elif is_phi_stable(chi, lsd.sigma.element_perm):
            exts[p.label] = ambient_extension(lsd, chi)
    values = []
    for k in rows:
        eE = sub_extension(lsd, Htab[k])
        row = []
        for p in pairs:
            if p.label not in exts:
                row.append(0)
                continue
            m = coset_multiplicity(exts[p.label], eE, lsd)
            if check_transport and transported_multiplicity(exts[p.label], eE, lsd) != m:
                raise InconsistencyError("multiplicity changes under psi_g transport")
            row.append(m)
        values.append(row)
    return MultiplicityData(rows, pairs, values)


# ---------------------------------------------------------------------------
# Y-functions
# ---------------------------------------------------------------------------

def columns_of(block: BlockDatum) -> List[Tuple[str, str]]:
    """Split representatives u_a: classes of the block by decreasing dimension, then A(u)-classes."""
    seen = {}
    for p in sorted(block.pairs, key=lambda p: (-p.dim, p.class_label)):
        if p.class_label not in seen:
            seen[p.class_label] = p.comp_group
    return [(c, a) for c, g in seen.items() for a in block.comp_groups[g].class_labels]


def e8_b6_sign(block: BlockDatum, class_label: str, q: Union[int, str]) -> int:
    """-1 exactly for the class E8(b6) of E8 when q = -1 mod 3."""
    if block.cartan.label != "E8" or class_label != "E8(b6)":
        return 1
    if q == "symbolic":
        raise ValidationError("the Y-function sign at E8(b6) depends on q mod 3; give a numeric q")
    return -1 if q % 3 == 2 else 1


def y_function(pair: GSpringerPair, lsd: LocalSystemDatum, gamma: BonnafeCharacter,
               frobenius: FrobeniusDatum, columns: Sequence[Tuple[str, str]] = None) -> List:
    """Y_iota(u_a) = sign * gamma(F(w)) * chi_iota(a) on the class of iota, 0 elsewhere."""
    block = lsd.block
    if columns is None:
        columns = columns_of(block)
    if gamma.character.group is not lsd.W:
        raise ValidationError("gamma is not a character of W_G(L)")
    cg = block.comp_groups[pair.comp_group]
    g = simplify(gamma(lsd.sigma.element_perm[lsd.w]))
    out = []
    for cls, a in columns:
        if cls != pair.class_label:
            out.append(0)
        else:
            sign = e8_b6_sign(block, cls, frobenius.q)
            out.append(simplify(sign * g * cg.value(pair.comp_char, a)))
    return out


def y_table(lsd: LocalSystemDatum, gamma: BonnafeCharacter, frobenius: FrobeniusDatum,
            columns: Sequence[Tuple[str, str]] = None) -> List[List]:
    if columns is None:
        columns = columns_of(lsd.block)
    return [y_function(p, lsd, gamma, frobenius, columns) for p in ordered_pairs(lsd.block)]


# ---------------------------------------------------------------------------
# the value table
# ---------------------------------------------------------------------------

@dataclass
class SheafValueTable:
    row_labels: List[str]
    column_labels: List[str]
    entries: List[List[LaurentPoly]]
    metadata: Dict = field(default_factory=dict)

    def evaluate(self, q: int) -> List[List]:
        if any(e.var != "q" for row in self.entries for e in row):
            raise ParityError("numeric evaluation needs integral powers of q")
        return [[e.evaluate(q) for e in row] for row in self.entries]

    def to_tsv(self, q: Union[int, str] = "symbolic") -> str:
        cells = self.entries if q == "symbolic" else self.evaluate(q)
        lines = ["\t".join(["A"] + self.column_labels)]
        for lab, row in zip(self.row_labels, cells):
            lines.append("\t".join([lab] + [str(x) if isinstance(x, LaurentPoly) else scalar_str(x) for x in row]))
        return "\n".join(lines) + "\n"

    def to_json(self, q: Union[int, str] = "symbolic") -> dict:
        doc = {"rows": self.row_labels, "columns": self.column_labels, "metadata": self.metadata}
        if q == "symbolic":
            doc["entries"] = [[str(x) for x in row] for row in self.entries]
            doc["coefficients"] = [[x.to_json() for x in row] for row in self.entries]
        else:
            doc["q"] = q
            doc["entries"] = [[scalar_str(x) for x in row] for row in self.evaluate(q)]
        return doc

    def dumps(self, q: Union[int, str] = "symbolic") -> str:
        return dump_json(self.to_json(q))


def _q_half_power(e: int) -> LaurentPoly:
    return LaurentPoly.monomial(e, 1, "q½")


def sheaf_value_table(block: BlockDatum, lsd: LocalSystemDatum = None, frobenius: FrobeniusDatum = None,
                      gamma: BonnafeCharacter = None, gt: GreenTransition = None,
                      ambient_exts: Dict[int, CosetClassFunction] = None,
                      allow_half_powers: bool = False, keep_zero_rows: bool = False) -> SheafValueTable:
    """Characteristic functions of the character sheaves attached to (block, lsd) on split unipotents."""
    if frobenius is None:
        frobenius = FrobeniusDatum.untwisted(block.group.rank)
    if lsd is None:
        lsd = stabilizer_coset_data(block, frobenius=frobenius)
    if lsd.block is not block:
        raise ValidationError("local-system datum belongs to another block")
    if gamma is None:
        gamma = BonnafeCharacter.trivial(block.relative_group)
    if gt is None:
        gt = green_transition(block, "stalk")
    pairs = ordered_pairs(block)
    if gt.normalization != "stalk" or gt.labels != [p.label for p in pairs]:
        raise ValidationError("Green transition is not the stalk solution for this block's index order")
    columns = columns_of(block)
    Y = y_table(lsd, gamma, frobenius, columns)
    n, width = len(pairs), len(columns)
    Ph = [[x.to_half() for x in row] for row in gt.P]
    Yh = [[LaurentPoly.constant(v, "q½") for v in row] for row in Y]
    X = x_from_y(Ph, Yh)
    mult = multiplicities(lsd, ambient_exts)
    scalars = []
    for p in pairs:
        a = block.ab(p)[0]
        scalars.append(_q_half_power(block.dim_G + a) * (-1) ** (-a))
    Htab = character_table(lsd.sub.group, with_b=False)
    row_labels, entries, zero_rows = [], [], []
    for r, k in enumerate(mult.rows):
        vals = []
        for c in range(width):
            total = Q_HALF_ZERO
            for i in range(n):
                m = mult.values[r][i]
                if m and X[i][c]:
                    total = total + scalars[i] * X[i][c] * m
            vals.append(total)
        if not allow_half_powers:
            vals = [v.from_half() for v in vals]
        label = _row_label(lsd, Htab, k)
        if any(vals) or keep_zero_rows:
            row_labels.append(label)
            entries.append(vals)
        else:
            zero_rows.append(label)
    metadata = {
        "block": block.id,
        "w": lsd.W.word_string(lsd.w),
        "sigma": list(frobenius.sigma),
        "q": frobenius.q,
        "gamma_source": gamma.source,
        "springer_convention": block.convention,
        "extension_convention": "user" if ambient_exts else "b-preferred",
        "green_normalization": gt.normalization,
        "vanishing_rows": zero_rows,
    }
    return SheafValueTable(row_labels, [f"{c}|{a}" for c, a in columns], entries, metadata)


def _row_label(lsd: LocalSystemDatum, Htab, k: int) -> str:
    """Rows of a full stabiliser carry the label of the Springer pair of E; otherwise E<k>."""
    if len(lsd.stabilizer) == lsd.W.order:
        E = Htab[k]
        W = lsd.W
        vals = [E(lsd.sub.image[x]) for x in W.class_reps]
        for p in lsd.block.pairs:
            chi = lsd.block.correspondent(p)
            if [chi(x) for x in W.class_reps] == vals:
                return p.label
    return f"E{k}"
