"""Command-line front end: ``gbt <command> [options]``.

Every command builds a report ``{schema_version, command, inputs, results,
timing}``; ``results`` never contains timestamps, so reruns with the same
flags print identical results.  Exit codes: 0 success, 1 a verification
failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Callable, Dict, List, Optional, Sequence

from . import __version__
from .classifier import (
    TABLE_GROUPS,
    TABLE_LABELS,
    Orbit,
    classification_summary,
    delta_orbits,
    group_by_label,
)
from .crystal import abelianization, build_gamma, irregularity, is_torsion_free, presentation, relators_hold
from .f2linalg import Subspace
from .fixedpoints import fixel_rows, fixel_tsv, forbidden_set, script_forbidden_set

SCHEMA_VERSION = 1
CACHE_KIND = "gbt-classification"


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, inputs: dict) -> None:
        self.command = command
        self.inputs = inputs
        self.results: dict = {}
        self.ok = True
        self.tsv: Optional[str] = None
        self.text: Optional[List[str]] = None
        self._start = time.perf_counter()

    def as_dict(self, with_timing: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "timing": {"seconds": round(time.perf_counter() - self._start, 3)} if with_timing else None,
        }


# -- cache -----------------------------------------------------------------------


def _write_cache(path: str, orbits: Sequence[Orbit]) -> None:
    subs = sorted(s for o in orbits for s in o.members)
    index = {s: i for i, s in enumerate(subs)}
    data = {
        "schema_version": SCHEMA_VERSION,
        "kind": CACHE_KIND,
        "free_subspaces": [s.to_json() for s in subs],
        "orbits": [[index[s] for s in o.members] for o in orbits],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh, sort_keys=True, indent=1)
    os.replace(tmp, path)


def _read_cache(path: str) -> Optional[List[Orbit]]:
    try:
        with open(path) as fh:
            data = json.load(fh)
        if data.get("schema_version") != SCHEMA_VERSION or data.get("kind") != CACHE_KIND:
            raise ValueError("schema mismatch")
        subs = [Subspace.from_json(b, 6) for b in data["free_subspaces"]]
        orbits = [Orbit(i, tuple(subs[j] for j in members)) for i, members in enumerate(data["orbits"])]
        if sorted(s for o in orbits for s in o.members) != sorted(subs):
            raise ValueError("orbits do not partition the cached subspaces")
        return orbits
    except FileNotFoundError:
        return None
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        print(f"warning: ignoring unusable cache {path}: {exc}; recomputing", file=sys.stderr)
        return None


def _orbits(args) -> List[Orbit]:
    if args.cache:
        cached = _read_cache(args.cache)
        if cached is not None:
            return cached
    orbits = list(delta_orbits())
    if args.cache:
        _write_cache(args.cache, orbits)
    return orbits


# -- commands --------------------------------------------------------------------


def _check_label(label: str) -> str:
    if label not in TABLE_GROUPS:
        raise UsageError(f"unknown label {label!r}; valid labels: {', '.join(TABLE_LABELS)}")
    return label


def _homology_row(label: str) -> dict:
    gamma = build_gamma(group_by_label(label))
    h1 = abelianization(gamma)
    return {
        "label": label,
        "h1": str(h1),
        "h1_structure": h1.to_json(),
        "q": irregularity(gamma),
        "relators_hold": relators_hold(gamma),
        "torsion_free": is_torsion_free(gamma),
        "generators": list(TABLE_GROUPS[label]),
    }


def cmd_classify(args) -> Report:
    rep = Report("classify", {"cache": bool(args.cache)})
    summary = classification_summary(_orbits(args))
    rep.results = summary
    rows = ["label\tq\tfamily_dim\torbit\torbit_size\tgenerators\th1"]
    text = [
        f"subspaces {summary['subspace_count']}, free {summary['free_count']}, orbits {summary['orbit_count']}"
    ]
    by_label = {o["label"]: o for o in summary["orbits"]}
    for label in TABLE_LABELS:
        o = by_label[label]
        h = _homology_row(label)
        rows.append(
            f"{label}\t{h['q']}\t{o['family_dim']}\t{o['id']}\t{o['size']}\t{' '.join(h['generators'])}\t{h['h1']}"
        )
        text.append(f"{label:>4}  q={h['q']}  dim={o['family_dim']}  orbit {o['id']:>2} ({o['size']:>2})  H1 = {h['h1']}")
    rep.tsv = "\n".join(rows) + "\n"
    rep.text = text
    return rep


def cmd_fixed_points(args) -> Report:
    rep = Report("fixed-points", {})
    rows = fixel_rows()
    same = forbidden_set() == script_forbidden_set()
    rep.results = {
        "elements": rows,
        "dimension_counts": {str(d): sum(r["fixed_dim"] == d for r in rows) for d in (0, 1, 2)},
        "forbidden_matches_script": same,
        "forbidden": sorted(str(v) for v in forbidden_set()),
    }
    rep.ok = same
    rep.tsv = fixel_tsv()
    return rep


def cmd_homology(args) -> Report:
    label = _check_label(args.label)
    rep = Report("homology", {"label": label})
    rep.results = _homology_row(label)
    rep.ok = rep.results["relators_hold"]
    rep.text = [f"{label}: H1 = {rep.results['h1']}, q = {rep.results['q']}"]
    return rep


def cmd_invariants(args) -> Report:
    from .fpinvariants import normal_subgroup_counts

    label = _check_label(args.label)
    if not 2 <= args.max_index <= 8:
        raise UsageError("--max-index must be between 2 and 8")
    rep = Report("invariants", {"label": label, "max_index": args.max_index})
    gamma = build_gamma(group_by_label(label))
    h1 = abelianization(gamma)
    counts = normal_subgroup_counts(presentation(gamma), args.max_index, h1)
    rep.results = {"label": label, "h1": str(h1), "counts": {str(k): v for k, v in counts.counts}}
    rep.tsv = "index\tcount\n" + "".join(f"{k}\t{v}\n" for k, v in counts.counts)
    return rep


def cmd_distinguish(args) -> Report:
    from .fpinvariants import distinguish

    rep = Report("distinguish", {"max_index": args.max_index, "escalate": not args.no_escalate})
    groups = {l: build_gamma(group_by_label(l)) for l in TABLE_LABELS}
    d = distinguish(groups, args.max_index, escalate=not args.no_escalate, threads=args.threads)
    extra = d.unexpected_mergers()
    rep.results = {
        "classes": d.classes,
        "stages": [{"stage": name, "merged": [c for c in cls if len(c) > 1]} for name, cls in d.stages],
        "invariants": {
            l: {"h1": str(h), "counts": {str(k): v for k, v in inv.counts}} for l, (h, inv) in d.data.items()
        },
        "unseparated_unexpected": [list(p) for p in extra],
    }
    rep.ok = not extra
    rep.tsv = "stage\tmerged\n" + "".join(
        f"{name}\t{' '.join('{' + ','.join(c) + '}' for c in cls if len(c) > 1)}\n" for name, cls in d.stages
    )
    return rep


def cmd_find_iso(args) -> Report:
    from .fpinvariants import search_affine_isomorphism, verify_isomorphism_witness

    a, b = _check_label(args.first), _check_label(args.second)
    rep = Report("find-iso", {"first": a, "second": b, "den": args.den})
    g1, g2 = build_gamma(group_by_label(a)), build_gamma(group_by_label(b))
    w = search_affine_isomorphism(g1, g2, denominator_bound=args.den)
    if w is None:
        rep.results = {"found": False, "status": "search space exhausted"}
        rep.text = [f"{a} -> {b}: no affine conjugation in the search space"]
        return rep
    ok = verify_isomorphism_witness(w, g1, g2)
    rep.results = {"found": True, "verified": ok, "witness": w.to_json()}
    rep.ok = ok
    rep.text = [f"{a} -> {b}: witness {'verified' if ok else 'FAILED verification'}", "A ="]
    rep.text += ["  " + " ".join(f"{x:>3}" for x in row) for row in w.linear]
    rep.text.append("b = (" + ", ".join(str(x) for x in w.translation) + ")")
    return rep


def cmd_delpezzo(args) -> Report:
    from . import delpezzo as dp

    if args.action == "characters":
        gens = dp.CASES[args.case]
        rep = Report("delpezzo characters", {"case": args.case})
        spaces = dp.character_decomposition(gens)
        rep.results = {
            "generators": [str(g) for g in gens],
            "spaces": [{"character": c.label, "basis": [dp.render(v) for v in c.basis]} for c in spaces],
        }
        rep.text = [f"H = <{', '.join(str(g) for g in gens)}>"]
        rep.text += [f"V^{c.label}: span{{{'; '.join(dp.render(v) for v in c.basis)}}}" for c in spaces]
        rep.tsv = "character\tbasis\n" + "".join(
            f"{c.label}\t{'; '.join(dp.render(v) for v in c.basis)}\n" for c in spaces
        )
        return rep
    if args.action == "classify":
        rep = Report("delpezzo classify", {"rank": args.rank})
        classes = dp.classify_invariant_subgroups(args.rank)
        rep.results = {"class_count": len(classes), "classes": [c.to_json() for c in classes]}
        rep.text = [f"{len(classes)} classes"] + [
            f"<{', '.join(c.to_json()['representative'])}>  size {len(c.members)}  reference {c.reference}"
            for c in classes
        ]
        return rep
    if args.action == "table":
        rep = Report("delpezzo table", {})
        checks = dp.check_invariance_table()
        rep.results = {"rows": [c.__dict__ for c in checks]}
        rep.ok = all(c.ok for c in checks)
        rep.tsv = "row\telement\tc2\teigenvalues\tok\n" + "".join(
            f"{c.row}\t{c.element}\t{c.csq}\t{','.join(c.eigenvalues)}\t{c.ok}\n" for c in checks
        )
        return rep
    rep = Report("delpezzo pencils", {})
    ok, checks = dp.pencil_orbit_check()
    ident = dp.conjugacy_identities()
    rep.results = {"pencils": [c.__dict__ for c in checks], "conjugacies": [list(x) for x in ident]}
    rep.ok = ok and all(x[1] for x in ident)
    return rep


def cmd_heisenberg(args) -> Report:
    from . import heisenberg as hz

    try:
        G = hz.FinAbGroup.parse(args.group)
    except ValueError as exc:
        raise UsageError(f"bad --group {args.group!r}: {exc}") from None
    rep = Report("heisenberg verify", {"group": list(G.factors)})
    try:
        r = hz.verify_decomposition(G, args.max_order)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep.results = r.to_json()
    rep.ok = r.ok
    text = [f"{G}: {'pass' if r.ok else 'FAIL'} ({r.eigenvectors} eigenvectors)"] + r.failures
    if G.order <= 4:
        tables = []
        for k in G.elements():
            for xi in G.elements():
                F = hz.eigenvector_F(G, k, xi)
                entry = {"k": list(k), "xi": list(xi), "exponents": F}
                line = f"F_{''.join(map(str, k))},{''.join(map(str, xi))} = {hz.render_exponents(G, F)}"
                if G.exponent == 2:
                    entry["xy"] = hz.render_xy(hz.xy_expansion(G, F))
                    line += f"   [{entry['xy']}]"
                tables.append(entry)
                text.append(line)
        rep.results["eigenvectors_table"] = tables
    rep.text = text
    return rep


# -- plumbing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv", "text"), default=argparse.SUPPRESS)
    common.add_argument("--cache", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, metavar="N", default=argparse.SUPPRESS)
    common.add_argument("--no-timing", action="store_true", default=argparse.SUPPRESS,
                        help="omit wall-clock timing so output is byte-for-byte reproducible")

    p = argparse.ArgumentParser(prog="gbt", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("classify", parents=[common], help="free subgroups, orbits, labels")
    sub.add_parser("fixed-points", parents=[common], help="elements with fixed points")
    s = sub.add_parser("homology", parents=[common], help="first homology of a family")
    s.add_argument("label")
    s = sub.add_parser("invariants", parents=[common], help="normal subgroup counts")
    s.add_argument("label")
    s.add_argument("--max-index", type=int, default=6)
    s = sub.add_parser("distinguish", parents=[common], help="partition the 16 groups by invariants")
    s.add_argument("--max-index", type=int, default=6)
    s.add_argument("--no-escalate", action="store_true")
    s = sub.add_parser("find-iso", parents=[common], help="affine isomorphism witness")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--den", type=int, default=4)

    dp = sub.add_parser("delpezzo", parents=[common], help="invariant (1,1,1) forms")
    dsub = dp.add_subparsers(dest="action", required=True)
    s = dsub.add_parser("characters", parents=[common])
    s.add_argument("--case", choices=("i", "ii", "h0"), required=True)
    s = dsub.add_parser("classify", parents=[common])
    s.add_argument("--rank", type=int, choices=(1, 2, 3), required=True)
    dsub.add_parser("table", parents=[common])
    dsub.add_parser("pencils", parents=[common])

    hp = sub.add_parser("heisenberg", parents=[common], help="Heisenberg eigenvector check")
    hsub = hp.add_subparsers(dest="action", required=True)
    s = hsub.add_parser("verify", parents=[common])
    s.add_argument("--group", required=True, help="invariant factors, e.g. 2,2")
    s.add_argument("--max-order", type=int, default=36)
    return p


COMMANDS: Dict[str, Callable] = {
    "classify": cmd_classify,
    "fixed-points": cmd_fixed_points,
    "homology": cmd_homology,
    "invariants": cmd_invariants,
    "distinguish": cmd_distinguish,
    "find-iso": cmd_find_iso,
    "delpezzo": cmd_delpezzo,
    "heisenberg": cmd_heisenberg,
}


def _flat_tsv(d: dict) -> str:
    lines = []
    for k in sorted(d):
        v = d[k]
        lines.append(f"{k}\t{json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}")
    return "\n".join(lines) + "\n"


def render(rep: Report, fmt: str, with_timing: bool = True) -> str:
    if fmt == "json":
        return json.dumps(rep.as_dict(with_timing), sort_keys=True, indent=2) + "\n"
    if fmt == "tsv":
        return rep.tsv if rep.tsv is not None else _flat_tsv(rep.results)
    lines = rep.text if rep.text is not None else [_flat_tsv(rep.results).rstrip("\n")]
    return "\n".join(lines) + "\n"


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name, default in (("format", "json"), ("cache", None), ("threads", 1), ("no_timing", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        rep = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"gbt: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(render(rep, args.format, not args.no_timing))
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
