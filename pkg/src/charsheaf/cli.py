"""Command-line front end.

Every option has a JSON config key of the same name (dashes become
underscores).  A key given both in ``--config`` and on the command line with
different values is rejected.  Exit status: 0 success, 2 validation error,
3 computational inconsistency.
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .arith import ParityError, scalar_str
from .errors import InconsistencyError, ValidationError

COMMANDS = ("chartable", "molien", "jinduce", "coset-classes", "relweyl", "springer-block", "green-solve",
            "sheaf-values", "selftest")

# option name -> (help, type)
OPTIONS = {
    "type": ("Cartan type, e.g. A, B2 or A2xA2", str),
    "rank": ("rank when --type is a single letter", int),
    "cartan": ("explicit Cartan matrix as JSON", str),
    "block": ("block JSON file or shipped fixture name", str),
    "levi": ("comma-separated 1-based simple-root labels of a standard Levi", str),
    "twist": ("diagram automorphism: 'id', 'flip' or comma-separated 1-based image labels", str),
    "q": ("an integer prime power or 'symbolic'", str),
    "output": ("output path (default: standard output)", str),
    "format": ("tsv or json", str),
    "springer_convention": ("lusztig or sign-twisted", str),
    "extension_convention": ("b-preferred (the only synthesised convention)", str),
    "normalization": ("kostka or stalk", str),
    "criteria": ("comma-separated criterion numbers for selftest", str),
}

DEFAULTS = {"q": "symbolic", "format": None, "springer_convention": "lusztig",
            "extension_convention": "b-preferred", "normalization": None}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="charsheaf", description="Exact character-sheaf combinatorics for Weyl groups.")
    p.add_argument("--version", action="version", version=f"charsheaf {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with option values")
    for key, (text, typ) in OPTIONS.items():
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=typ, default=None, help=text)
    return p


def resolve_config(args: argparse.Namespace) -> Dict:
    cfg = {"command": args.command}
    from_file: Dict = {}
    if args.config:
        try:
            from_file = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise ValidationError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(from_file, dict):
            raise ValidationError("config must be a JSON object")
        unknown = set(from_file) - set(OPTIONS) - {"command"}
        if unknown:
            raise ValidationError(f"unknown config keys {sorted(unknown)}")
        if from_file.get("command", args.command) != args.command:
            raise ValidationError("config command conflicts with the command line")
    for key in OPTIONS:
        flag = getattr(args, key)
        if key in from_file:
            value = from_file[key]
            if key == "cartan" and not isinstance(value, str):
                value = json.dumps(value)
            if flag is not None and str(flag) != str(value):
                raise ValidationError(f"--{key.replace('_', '-')} conflicts with the config file")
            cfg[key] = value
        elif flag is not None:
            cfg[key] = flag
        elif DEFAULTS.get(key) is not None:
            cfg[key] = DEFAULTS[key]
    if cfg.get("q", "symbolic") != "symbolic":
        try:
            cfg["q"] = int(cfg["q"])
        except ValueError:
            raise ValidationError("q must be an integer or 'symbolic'") from None
    for key, allowed in (("springer_convention", ("lusztig", "sign-twisted")),
                         ("extension_convention", ("b-preferred",)),
                         ("normalization", ("kostka", "stalk", None)),
                         ("format", ("tsv", "json", None))):
        if cfg.get(key) not in allowed:
            raise ValidationError(f"{key} must be one of {[a for a in allowed if a]}")
    return cfg


def config_hash(cfg: Dict) -> str:
    return hashlib.sha256(json.dumps(cfg, sort_keys=True).encode()).hexdigest()[:16]


def header(cfg: Dict) -> Dict:
    return {"tool": f"charsheaf {__version__}", "command": cfg["command"], "config_sha256": config_hash(cfg),
            "springer_convention": cfg.get("springer_convention"),
            "extension_convention": cfg.get("extension_convention")}


def header_lines(cfg: Dict) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in header(cfg).items())


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------

def cartan_of(cfg: Dict):
    from .coxeter import CartanDatum
    if "cartan" in cfg:
        try:
            doc = json.loads(cfg["cartan"])
        except json.JSONDecodeError:
            raise ValidationError("--cartan must be JSON") from None
        return CartanDatum.from_json(doc if isinstance(doc, dict) else {"matrix": doc})
    if "type" not in cfg:
        raise ValidationError("give --type (with --rank) or --cartan")
    label = cfg["type"]
    if "rank" in cfg:
        label = f"{label}{cfg['rank']}"
    return CartanDatum.from_type(label)


def group_of(cfg: Dict):
    from .coxeter import build_group
    return build_group(cartan_of(cfg))


def labels_to_indices(g, text: Optional[str]) -> tuple:
    if not text:
        return ()
    labels = list(g.cartan.root_labels)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in labels:
            raise ValidationError(f"unknown simple-root label {tok!r}")
        out.append(labels.index(tok))
    return tuple(sorted(out))


def twist_of(g, text: Optional[str]) -> tuple:
    from .coxeter import diagram_automorphisms
    n = g.rank
    if not text or text == "id":
        return tuple(range(n))
    if text == "flip":
        nontrivial = [p for p in diagram_automorphisms(g) if p != tuple(range(n))]
        if not nontrivial:
            raise ValidationError("the diagram has no nontrivial automorphism")
        return nontrivial[0]
    perm = labels_to_indices_ordered(g, text)
    if sorted(perm) != list(range(n)):
        raise ValidationError("twist must list the image of every simple root")
    return perm


def labels_to_indices_ordered(g, text: str) -> tuple:
    labels = list(g.cartan.root_labels)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok not in labels:
            raise ValidationError(f"unknown simple-root label {tok!r}")
        out.append(labels.index(tok))
    return tuple(out)


def block_of(cfg: Dict):
    from .springer import load_block_data, load_fixture, typeA_springer_block
    conv = cfg.get("springer_convention", "lusztig")
    if "block" in cfg:
        name = cfg["block"]
        path = Path(name)
        block = load_block_data(path) if path.exists() else load_fixture(name)
        if conv != block.convention:
            block.convention = conv
        return block
    g = group_of(cfg)
    label = g.type_label
    if label.startswith("A") and "x" not in label:
        return typeA_springer_block(g.rank + 1, conv)
    raise ValidationError("only type A blocks are generated; give --block for other types")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def tsv(rows: List[List]) -> str:
    return "".join("\t".join(str(c) for c in row) + "\n" for row in rows)


def cmd_chartable(cfg):
    from .chartab import character_table
    g = group_of(cfg)
    t = character_table(g)
    if cfg.get("format") == "json":
        return {"classes": [c.label for c in g.classes], "sizes": [c.size for c in g.classes],
                "characters": [[scalar_str(v) for v in chi.values] for chi in t],
                "b": t.b_invariants}
    return t.to_tsv()


def cmd_molien(cfg):
    from .chartab import character_table
    from .molien import b_invariant, basic_degrees, fake_degree
    g = group_of(cfg)
    t = character_table(g)
    degrees = basic_degrees(g, g)
    rows = [["chi", "degree", "gamma", "b", "fake_degree"]]
    for i, chi in enumerate(t):
        gamma, b = b_invariant(chi, g)
        rows.append([f"X{i + 1}", chi.degree, gamma, b, str(fake_degree(chi, g, degrees))])
    if cfg.get("format") == "json":
        return {"degrees": list(degrees.degrees), "rows": rows[1:], "columns": rows[0]}
    return tsv(rows)


def cmd_jinduce(cfg):
    from .chartab import character_table
    from .coxeter import levi
    from .molien import b_invariant, j_induce, quotient_module
    g = group_of(cfg)
    J = labels_to_indices(g, cfg.get("levi"))
    L = levi(g, J)
    sub = g.subgroup(L.elements, name="W_L")
    U = quotient_module(sub, g)
    table = character_table(g)
    sub_table = character_table(sub.group, with_b=False)
    rows = [["chi_L", "degree", "b_L", "j_induced", "b"]]
    for i, chi in enumerate(sub_table):
        gamma, b_u = b_invariant(chi, U) if U.rank else (1, 0)
        if gamma != 1:
            rows.append([f"Y{i + 1}", chi.degree, b_u, "gamma>1", ""])
            continue
        psi = j_induce(sub, chi, g, table, U)
        rows.append([f"Y{i + 1}", chi.degree, b_u, f"X{table.index(psi) + 1}", b_invariant(psi, g)[1]])
    if cfg.get("format") == "json":
        return {"levi": [g.cartan.root_labels[j] for j in J], "columns": rows[0], "rows": rows[1:]}
    return tsv(rows)


def cmd_coset_classes(cfg):
    from .chartab import character_table
    from .coset import is_phi_stable, twisted_classes
    from .coxeter import Automorphism
    g = group_of(cfg)
    a = Automorphism(g, twist_of(g, cfg.get("twist")))
    tc = twisted_classes(g, a.element_perm, 1)
    stable = sum(1 for chi in character_table(g) if is_phi_stable(chi, a.element_perm))
    rows = [["representative", "size", "twisted_centralizer"]]
    for rep, size, cent in zip(tc.representatives, tc.sizes, tc.centralizer_orders):
        rows.append([g.word_string(rep), size, cent])
    if cfg.get("format") == "json":
        return {"twist": list(a.label_perm), "classes": rows[1:], "stable_irreducibles": stable}
    return tsv(rows) + f"# stable irreducibles: {stable}\n"


def cmd_relweyl(cfg):
    from .coxeter import levi, relative_weyl_group
    g = group_of(cfg)
    J = labels_to_indices(g, cfg.get("levi"))
    rel = relative_weyl_group(g, levi(g, J))
    cbar = rel.levi.complement
    R = rel.group
    return {
        "levi": [g.cartan.root_labels[j] for j in J],
        "order": rel.order,
        "coxeter_generated": rel.is_coxeter_generated,
        "generators": {g.cartan.root_labels[cbar[k]]: g.word_string(rel.embedding[x])
                       for k, x in sorted(rel.coxeter_generators.items())},
        "elements": [{"word_in_W": g.word_string(rel.embedding[x]),
                      "quotient_matrix": [[scalar_str(v) for v in row] for row in R.matrix(x)]}
                     for x in range(R.order)],
    }


def cmd_springer_block(cfg):
    block = block_of(cfg)
    doc = block.to_json()
    for p, d in zip(block.pairs, doc["pairs"]):
        d["a"], d["b"] = block.ab(p)
    return doc


def cmd_green_solve(cfg):
    from .green import green_transition
    block = block_of(cfg)
    gt = green_transition(block, cfg.get("normalization") or "kostka")
    if cfg.get("format") == "tsv":
        rows = [["P"] + gt.labels] + [[lab] + [str(x) for x in row] for lab, row in zip(gt.labels, gt.P)]
        return tsv(rows)
    return gt.to_json()


def cmd_sheaf_values(cfg):
    from .assembly import FrobeniusDatum, sheaf_value_table
    block = block_of(cfg)
    sigma = twist_of(block.group, cfg.get("twist"))
    fd = FrobeniusDatum(sigma, cfg.get("q", "symbolic"))
    table = sheaf_value_table(block, frobenius=fd)
    if cfg.get("format") == "json":
        return table.to_json(fd.q)
    return table.to_tsv(fd.q)


def cmd_selftest(cfg):
    from .selftest import run_all
    numbers = [int(x) for x in cfg["criteria"].split(",")] if cfg.get("criteria") else None
    results = run_all(numbers)
    text = "".join(r.line() + "\n" for r in results)
    failed = [r.number for r in results if not r.passed]
    return text, failed


HANDLERS = {
    "chartable": cmd_chartable, "molien": cmd_molien, "jinduce": cmd_jinduce, "coset-classes": cmd_coset_classes,
    "relweyl": cmd_relweyl, "springer-block": cmd_springer_block, "green-solve": cmd_green_solve,
    "sheaf-values": cmd_sheaf_values,
}


def render(cfg: Dict, result) -> str:
    if isinstance(result, str):
        return header_lines(cfg) + result
    doc = {"header": header(cfg), "result": result}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit(cfg: Dict, text: str):
    if "output" in cfg:
        Path(cfg["output"]).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg["command"] == "selftest":
            text, failed = cmd_selftest(cfg)
            emit(cfg, header_lines(cfg) + text)
            return 3 if failed else 0
        emit(cfg, render(cfg, HANDLERS[cfg["command"]](cfg)))
        return 0
    except ValidationError as exc:
        print(f"error: validation: {_one_line(exc)}", file=sys.stderr)
        return 2
    except (InconsistencyError, ParityError) as exc:
        print(f"error: inconsistency: {_one_line(exc)}", file=sys.stderr)
        return 3


def _one_line(exc: Exception) -> str:
    return " ".join(str(exc).split())


def main():
    sys.exit(run())
