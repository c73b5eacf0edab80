"""Unipotent pairs, blocks and the generalized Springer correspondence as data.

Type A blocks are generated; other types are read from JSON block files.  A
block file looks like::

    {
      "id": "B2-springer",
      "cartan": {"type": "B", "rank": 2},
      "dim_G": 10,
      "levi": [],
      "cuspidal": {"class": "1", "dim_class": 0, "dim_center": 2, "local_system": "1"},
      "pairs": [{"class": "5", "dim": 8, "comp_group": "1", "comp_char": "1",
                 "correspondent_index": 0}, ...],
      "comp_groups": {"1": {"generators": [], "classes": [{"label": "1", "rep": []}],
                            "characters": {"1": [1]}}}
    }

Levi labels are 1-based simple-root labels.  Optional per-pair ``a`` and ``b``
are checked against the dimension formulas.  ``sigma_action`` may be given and
must be ``"trivial"``.
"""

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .chartab import CharacterTable, ClassFunction, character_table, inner_product
from .coxeter import (CartanDatum, CoxeterGroupTable, FiniteGroup, RelativeWeylGroup, build_group, levi,
                      relative_weyl_group)
from .errors import ValidationError

CONVENTIONS = ("lusztig", "sign-twisted")


# ---------------------------------------------------------------------------
# component groups
# ---------------------------------------------------------------------------

@dataclass
class ComponentGroup:
    """A small group A(u) with labelled classes and labelled irreducible characters."""

    name: str
    generators: List[List[int]]
    class_labels: List[str]
    class_reps: List[List[int]]
    characters: Dict[str, List]

    @cached_property
    def group(self) -> FiniteGroup:
        if not self.generators:
            return FiniteGroup([[0]], [], [()], name=self.name)
        return FiniteGroup.generate(self.generators, name=self.name)

    @cached_property
    def class_order(self) -> List[int]:
        """For each labelled class, its index among ``group.classes``."""
        g = self.group
        out = []
        for rep in self.class_reps:
            perm = rep if rep else list(range(g.degree))
            out.append(g.class_of[g.index_of_perm(perm)])
        return out

    def character(self, label: str) -> ClassFunction:
        if label not in self.characters:
            raise ValidationError(f"component group {self.name} has no character {label!r}")
        vals = [0] * len(self.group.classes)
        for k, v in zip(self.class_order, self.characters[label]):
            vals[k] = v
        return ClassFunction(self.group, vals)

    def value(self, char_label: str, class_label: str):
        return self.characters[char_label][self.class_labels.index(class_label)]

    def validate(self):
        g = self.group
        if sorted(self.class_order) != list(range(len(g.classes))):
            raise ValidationError(f"component group {self.name}: class representatives do not cover the classes")
        if len(self.characters) != len(g.classes):
            raise ValidationError(f"component group {self.name}: wrong number of characters")
        chars = [self.character(k) for k in self.characters]
        for i, a in enumerate(chars):
            for j, b in enumerate(chars):
                if inner_product(a, b) != (1 if i == j else 0):
                    raise ValidationError(f"component group {self.name}: character table is not orthonormal")

    def to_json(self) -> dict:
        return {
            "generators": [list(p) for p in self.generators],
            "classes": [{"label": l, "rep": list(r)} for l, r in zip(self.class_labels, self.class_reps)],
            "characters": {k: list(v) for k, v in self.characters.items()},
        }

    @classmethod
    def from_json(cls, name: str, doc: dict) -> "ComponentGroup":
        try:
            return cls(name, [list(p) for p in doc["generators"]],
                       [c["label"] for c in doc["classes"]], [list(c["rep"]) for c in doc["classes"]],
                       {k: list(v) for k, v in doc["characters"].items()})
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"component group {name}: malformed entry ({exc})") from None


def trivial_component_group() -> ComponentGroup:
    return ComponentGroup("1", [], ["1"], [[]], {"1": [1]})


# ---------------------------------------------------------------------------
# pairs and blocks
# ---------------------------------------------------------------------------

@dataclass
class GSpringerPair:
    class_label: str
    dim: int
    comp_group: str
    comp_char: str
    correspondent_index: int
    a: Optional[int] = None
    b: Optional[int] = None

    @property
    def key(self) -> Tuple[str, str]:
        return (self.class_label, self.comp_char)

    @property
    def label(self) -> str:
        return f"{self.class_label}:{self.comp_char}"

    def to_json(self) -> dict:
        d = {"class": self.class_label, "dim": self.dim, "comp_group": self.comp_group,
             "comp_char": self.comp_char, "correspondent_index": self.correspondent_index}
        if self.a is not None:
            d["a"] = self.a
        if self.b is not None:
            d["b"] = self.b
        return d


@dataclass
class BlockDatum:
    id: str
    cartan: CartanDatum
    dim_G: int
    levi_simple: Tuple[int, ...]
    cuspidal: Dict
    pairs: List[GSpringerPair]
    comp_groups: Dict[str, ComponentGroup]
    convention: str = "lusztig"
    extra: Dict = field(default_factory=dict)

    @cached_property
    def group(self) -> CoxeterGroupTable:
        return build_group(self.cartan)

    @cached_property
    def levi(self):
        return levi(self.group, self.levi_simple)

    @cached_property
    def relative(self) -> RelativeWeylGroup:
        return relative_weyl_group(self.group, self.levi)

    @property
    def relative_group(self):
        return self.relative.group

    @cached_property
    def table(self) -> CharacterTable:
        return character_table(self.relative.group)

    @property
    def dim_center(self) -> int:
        return int(self.cuspidal["dim_center"])

    @property
    def dim_cuspidal_class(self) -> int:
        return int(self.cuspidal["dim_class"])

    @cached_property
    def dim_L(self) -> int:
        return self.dim_G - 2 * (self.group.npos - len([k for k in self.levi.roots if self.group.is_positive(k)]))

    def ab(self, pair: GSpringerPair) -> Tuple[int, int]:
        return ab_values(pair, self)

    def correspondent(self, pair: GSpringerPair) -> ClassFunction:
        """The character E_iota of W_G(L) under the block's convention."""
        chi = self.table[pair.correspondent_index]
        if self.convention == "sign-twisted":
            chi = chi * relative_sign(self.relative.group)
        return chi

    def pair_by_label(self, label: str) -> GSpringerPair:
        for p in self.pairs:
            if p.label == label:
                return p
        raise ValidationError(f"no pair {label} in block {self.id}")

    def to_json(self) -> dict:
        d = {
            "id": self.id,
            "cartan": self.cartan_json(),
            "dim_G": self.dim_G,
            "levi": [self.cartan.root_labels[i] for i in self.levi_simple],
            "cuspidal": dict(self.cuspidal),
            "pairs": [p.to_json() for p in self.pairs],
            "comp_groups": {k: v.to_json() for k, v in self.comp_groups.items()},
        }
        if self.convention != "lusztig":
            d["convention"] = self.convention
        d.update(self.extra)
        return d

    def cartan_json(self) -> dict:
        label = self.cartan.label
        if "x" not in label and label[0].isalpha():
            return {"type": label[0], "rank": int(label[1:])}
        return {"type": label}

    def dumps(self) -> str:
        return dump_json(self.to_json())


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def relative_sign(g) -> ClassFunction:
    """det of the quotient reflection representation (the sign character when W_G(L) is Coxeter)."""
    import sympy
    return ClassFunction.from_element_function(g, lambda w: int(sympy.Matrix(g.matrix(w)).det()) if g.rank else 1)


def ab_values(pair: GSpringerPair, block: BlockDatum) -> Tuple[int, int]:
    """a = -dim O - dim Z(L);  b = (dim G - dim O) - (dim L - dim O_0)."""
    a = -pair.dim - block.dim_center
    b = (block.dim_G - pair.dim) - (block.dim_L - block.dim_cuspidal_class)
    return a, b


# ---------------------------------------------------------------------------
# type A
# ---------------------------------------------------------------------------

def partitions(n: int, largest: Optional[int] = None) -> List[Tuple[int, ...]]:
    """Partitions of n in reverse lexicographic order: (n) first, (1^n) last."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return out


def transpose(lam: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0] if lam else 0))


def partition_label(lam: Sequence[int]) -> str:
    return ",".join(str(x) for x in lam)


def parse_partition(label: str) -> Tuple[int, ...]:
    return tuple(int(x) for x in label.split(",") if x)


def class_dimension_gl(lam: Sequence[int]) -> int:
    n = sum(lam)
    return n * n - sum(x * x for x in transpose(lam))


def _beta(lam: Sequence[int], length: int) -> Tuple[int, ...]:
    lam = list(lam) + [0] * (length - len(lam))
    return tuple(lam[i] + length - 1 - i for i in range(length))


def mn_character(lam: Sequence[int], mu: Sequence[int]) -> int:
    """chi^lambda at cycle type mu by the Murnaghan-Nakayama rule on beta-sets."""
    memo: Dict = {}

    def rec(beta: frozenset, parts: Tuple[int, ...]) -> int:
        if not parts:
            return 1
        key = (beta, parts)
        if key in memo:
            return memo[key]
        k = parts[0]
        total = 0
        for x in beta:
            y = x - k
            if y >= 0 and y not in beta:
                sign = (-1) ** sum(1 for z in beta if y < z < x)
                total += sign * rec((beta - {x}) | {y}, parts[1:])
        memo[key] = total
        return total

    length = max(len(lam), 1) + sum(mu)
    return rec(frozenset(_beta(lam, length)), tuple(sorted(mu, reverse=True)))


def cycle_type_A(g: CoxeterGroupTable, w: int) -> Tuple[int, ...]:
    """Cycle type of w in W(A_{n-1}) = S_n, reading s_i as the transposition (i, i+1)."""
    n = g.rank + 1
    perm = list(range(n))
    for k in g.words[w]:
        i = k
        perm = [perm[j] if j not in (i, i + 1) else perm[i + 1 if j == i else i] for j in range(n)]
    seen = [False] * n
    cyc = []
    for s in range(n):
        if not seen[s]:
            l = 0
            t = s
            while not seen[t]:
                seen[t] = True
                t = perm[t]
                l += 1
            cyc.append(l)
    return tuple(sorted(cyc, reverse=True))


def symmetric_character(g, lam: Sequence[int]) -> ClassFunction:
    """The irreducible character chi_lambda of W(A_{n-1}) (chi_(n) trivial)."""
    return ClassFunction.from_element_function(g, lambda w: mn_character(lam, cycle_type_A(g, w)))


def typeA_springer_block(n: int, convention: str = "lusztig") -> BlockDatum:
    """The Springer block of GL_n: class lambda <-> chi_lambda (regular class <-> trivial)."""
    if not 2 <= n <= 6:
        raise ValidationError("type A blocks are generated for 2 <= n <= 6")
    if convention not in CONVENTIONS:
        raise ValidationError(f"unknown convention {convention!r}")
    cartan = CartanDatum.from_type(f"A{n - 1}")
    g = build_group(cartan)
    rel = relative_weyl_group(g, levi(g, ()))
    table = character_table(rel.group)
    pairs = []
    for lam in partitions(n):
        chi = symmetric_character(rel.group, lam)
        pairs.append(GSpringerPair(partition_label(lam), class_dimension_gl(lam), "1", "1", table.index(chi)))
    block = BlockDatum(
        id=f"GL{n}-springer", cartan=cartan, dim_G=n * n, levi_simple=(),
        cuspidal={"class": "1", "dim_class": 0, "dim_center": n, "local_system": "1"},
        pairs=pairs, comp_groups={"1": trivial_component_group()}, convention=convention)
    validate_block(block)
    return block


# ---------------------------------------------------------------------------
# loading and validation
# ---------------------------------------------------------------------------

def block_from_json(doc: dict) -> BlockDatum:
    try:
        cartan = CartanDatum.from_json(doc["cartan"])
        labels = list(cartan.root_labels)
        levi_simple = []
        for lab in doc.get("levi", []):
            if str(lab) not in labels:
                raise ValidationError(f"unknown Levi root label {lab!r}")
            levi_simple.append(labels.index(str(lab)))
        cusp = dict(doc["cuspidal"])
        for key in ("class", "dim_class", "dim_center", "local_system"):
            if key not in cusp:
                raise ValidationError(f"cuspidal datum is missing {key!r}")
        pairs = []
        for p in doc["pairs"]:
            pairs.append(GSpringerPair(str(p["class"]), int(p["dim"]), str(p["comp_group"]), str(p["comp_char"]),
                                       int(p["correspondent_index"]), p.get("a"), p.get("b")))
        comp = {k: ComponentGroup.from_json(k, v) for k, v in doc.get("comp_groups", {}).items()}
        if "1" not in comp:
            comp["1"] = trivial_component_group()
        known = {"id", "cartan", "dim_G", "levi", "cuspidal", "pairs", "comp_groups", "convention"}
        extra = {k: v for k, v in doc.items() if k not in known}
        if extra.get("sigma_action", "trivial") != "trivial":
            raise ValidationError("only a trivial sigma action on pairs is supported")
        block = BlockDatum(str(doc.get("id", "block")), cartan, int(doc["dim_G"]), tuple(levi_simple), cusp, pairs,
                           comp, doc.get("convention", "lusztig"), extra)
    except KeyError as exc:
        raise ValidationError(f"block file is missing {exc}") from None
    if block.convention not in CONVENTIONS:
        raise ValidationError(f"unknown convention {block.convention!r}")
    validate_block(block)
    return block


def validate_block(block: BlockDatum):
    seen = set()
    for p in block.pairs:
        if p.key in seen:
            raise ValidationError(f"correspondence not injective: pair {p.label} appears twice")
        seen.add(p.key)
        if p.comp_group not in block.comp_groups:
            raise ValidationError(f"pair {p.label}: unknown component group {p.comp_group!r}")
        if p.comp_char not in block.comp_groups[p.comp_group].characters:
            raise ValidationError(f"pair {p.label}: unknown local system {p.comp_char!r}")
    for cg in block.comp_groups.values():
        cg.validate()
    nirr = len(block.table)
    idx = [p.correspondent_index for p in block.pairs]
    if len(set(idx)) != len(idx):
        dup = sorted({p.label for p in block.pairs if idx.count(p.correspondent_index) > 1})
        raise ValidationError(f"correspondence not injective: pairs {dup} share a character")
    if any(i < 0 or i >= nirr for i in idx):
        raise ValidationError("correspondent index out of range")
    if len(idx) != nirr:
        raise ValidationError(f"correspondence not surjective: {len(idx)} pairs for {nirr} characters")
    for p in block.pairs:
        a, b = ab_values(p, block)
        if p.a is not None and p.a != a:
            raise ValidationError(f"pair {p.label}: a-value {p.a} contradicts dims (expected {a})")
        if p.b is not None and p.b != b:
            raise ValidationError(f"pair {p.label}: b-value {p.b} contradicts dims (expected {b})")
        if a > -block.dim_center:
            raise ValidationError(f"pair {p.label}: a-value exceeds -dim Z(L)")


def load_block_data(path) -> BlockDatum:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc.msg})") from None
    return block_from_json(doc)


def check_partition(blocks: Sequence[BlockDatum], all_pairs: Sequence[Tuple[str, str]]):
    """Every pair of N_G lies in exactly one of the blocks."""
    count: Dict[Tuple[str, str], int] = {}
    for b in blocks:
        for p in b.pairs:
            count[p.key] = count.get(p.key, 0) + 1
    for key in all_pairs:
        if count.get(key, 0) != 1:
            raise ValidationError(f"pair {key} lies in {count.get(key, 0)} blocks")
    extra = set(count) - set(all_pairs)
    if extra:
        raise ValidationError(f"pairs {sorted(extra)} are not in N_G")


def data_path(name: str) -> Path:
    return Path(__file__).with_name("data") / name


def load_fixture(name: str) -> BlockDatum:
    if not name.endswith(".json"):
        name += ".json"
    path = data_path(name)
    if not path.exists():
        raise ValidationError(f"no block file or shipped fixture named {name[:-5]!r}")
    return load_block_data(path)
