"""Command line interface: compute homology tables, sweep word files, and
run the verification suites."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path
from typing import Optional

from .algebra import (
    BigradedGroups, euler_characteristic, field_dims, homology,
    specialize_reduced, specialize_unreduced,
)
from .analysis import (
    alternating_exponent_lists, default_grid, knight_move_check,
    omega4_structure_check, omega6_identity_check, predicted_summands,
    torsion_only_two, verify_summands,
)
from .braid import (
    BraidWord, BraidWordError, MurasugiSpec, all_words_upto, closure_meta,
    murasugi_word, parse_word, read_word_file,
)
from .closure import full_pipeline
from .oracle import MAX_ORACLE_LENGTH, cube_khovanov, kauffman_bracket

EXIT_OK = 0
EXIT_CLAIM_FAILED = 1
EXIT_PARSE_ERROR = 2
EXIT_ORACLE_MISMATCH = 3


def _threads() -> int:
    env = os.environ.get("KH3_THREADS")
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


def _cell(free: int, torsion: tuple[int, ...]) -> str:
    parts = []
    if free == 1:
        parts.append("Z")
    elif free > 1:
        parts.append("Z" + str(free).translate(_SUPERSCRIPT))
    for t in torsion:
        parts.append(f"Z/{t}")
    return ", ".join(parts)


def groups_table(groups: BigradedGroups) -> str:
    if not groups.data:
        return "(trivial)"
    is_ = sorted({i for i, _ in groups.data})
    js = sorted({j for _, j in groups.data})
    rows = [[""] + [f"j={j}" for j in js]]
    for i in is_:
        row = [f"i={i}"]
        for j in js:
            f, t = groups.at(i, j)
            row.append(_cell(f, t) if (f or t) else ".")
        rows.append(row)
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows)


def dims_table(dims: dict[tuple[int, int], int]) -> str:
    if not dims:
        return "(trivial)"
    is_ = sorted({i for i, _ in dims})
    js = sorted({j for _, j in dims})
    rows = [[""] + [f"j={j}" for j in js]]
    for i in is_:
        rows.append([f"i={i}"] + [str(dims.get((i, j), 0) or ".") for j in js])
    widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)) for r in rows)


def _spec_from_args(args) -> Optional[MurasugiSpec]:
    if not args.cls:
        return None
    alt = tuple(int(x) for x in args.alt.split(",")) if args.alt else ()
    return MurasugiSpec(args.cls, k=args.k, l=args.l, alt=alt)


def cmd_compute(args) -> int:
    try:
        if args.word is not None and args.cls:
            raise BraidWordError("give either --word or --class, not both")
        if args.word is not None:
            w = parse_word(args.word)
        elif args.cls:
            w = murasugi_word(_spec_from_args(args))
        else:
            raise BraidWordError("one of --word or --class is required")
    except (BraidWordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    A = full_pipeline(w)
    C = specialize_reduced(A) if args.reduced else specialize_unreduced(A)
    if args.ring == "Z":
        groups = homology(C)
        payload = groups.to_json_obj()
        table = groups_table(groups)
    else:
        p = 0 if args.ring == "Q" else 2
        dims = field_dims(C, p)
        payload = [{"i": i, "j": j, "dim": d} for (i, j), d in sorted(dims.items())]
        table = dims_table(dims)
    meta = closure_meta(w)
    if args.output == "json":
        print(json.dumps({"word": str(w), "ring": args.ring,
                          "reduced": args.reduced, "components": meta.components,
                          "groups": payload}))
    else:
        kind = "reduced" if args.reduced else "unreduced"
        print(f"word {w}  ({meta.components} closure component(s), "
              f"writhe {meta.writhe}); {kind} homology over {args.ring}")
        print(table)
    if args.oracle:
        if args.ring != "Z":
            print("oracle comparison needs --ring Z", file=sys.stderr)
            return EXIT_PARSE_ERROR
        want = cube_khovanov(w, reduced=args.reduced)
        got = homology(C)
        if want == got:
            print("oracle: MATCH")
        else:
            print("oracle: MISMATCH")
            return EXIT_ORACLE_MISMATCH
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify suites


def _report(case: str, ok: bool, **extra) -> bool:
    line = {"case": case, "pass": bool(ok)}
    line.update(extra)
    print(json.dumps(line))
    return ok


def _torus_cases(kmax: int):
    for k in range(1, kmax + 1):
        yield MurasugiSpec("omega0", k=k)
    for cls in ("omega1", "omega2", "omega3"):
        for k in range(0, kmax + 1):
            yield MurasugiSpec(cls, k=k)


def verify_torus(kmax: int) -> bool:
    ok = True
    for spec in _torus_cases(kmax):
        rep = verify_summands(murasugi_word(spec), predicted_summands(spec))
        ok &= _report(f"{spec.cls} k={spec.k}", rep["pass"],
                      mismatch=rep.get("first_mismatch"))
    return ok


def verify_omega5(kmax: int, lmax: int) -> bool:
    ok = True
    for k in range(1, kmax + 1):
        for l in range(1, lmax + 1):
            spec = MurasugiSpec("omega5", k=k, l=l)
            rep = verify_summands(murasugi_word(spec), predicted_summands(spec))
            ok &= _report(f"omega5 k={k} l={l}", rep["pass"],
                          mismatch=rep.get("first_mismatch"))
    return ok


def verify_omega4(kmax: int, lmax: int) -> bool:
    ok = True
    for k in range(1, kmax + 1):
        for l in range(1, lmax + 1):
            rep = omega4_structure_check(k, l)
            ok &= _report(f"omega4 k={k} l={l}", rep["pass"])
    return ok


def verify_omega6(kmax: int, alt_total: int = 5) -> bool:
    ok = True
    for k in range(1, kmax + 1):
        for alt in alternating_exponent_lists(alt_total):
            rep = omega6_identity_check(k, alt)
            ok &= _report(f"omega6 k={k} alt={','.join(map(str, alt))}", rep["pass"])
    return ok


def verify_torsion() -> bool:
    ok = True
    for label, spec in default_grid():
        groups = homology(specialize_unreduced(full_pipeline(murasugi_word(spec))))
        good = torsion_only_two(groups)
        ok &= _report(f"torsion {label}", good,
                      torsion=[t for _i, _j, t in groups.torsion_factors()][:8])
    return ok


def verify_knight() -> bool:
    ok = True
    for label, spec in default_grid():
        w = murasugi_word(spec)
        dims = field_dims(specialize_unreduced(full_pipeline(w)), 0)
        good, _wit = knight_move_check(dims, closure_meta(w).components)
        ok &= _report(f"knight {label}", good)
    return ok


def _oracle_case(s: str) -> tuple[str, bool]:
    w = parse_word(s)
    A = full_pipeline(w)
    ok = homology(specialize_unreduced(A)) == cube_khovanov(w)
    return s, ok


def oracle_corpus(maxlen: int, n_random: int = 200, random_len: int = 10,
                  seed: int = 2024) -> list[str]:
    import random as _random

    words = [str(w) for w in all_words_upto(maxlen)]
    rng = _random.Random(seed)
    for _ in range(n_random):
        n = rng.randint(maxlen + 1, random_len)
        words.append("".join(rng.choice("aAbB") for _ in range(n)))
    return words

def verify_oracle(maxlen: int, n_random: int = 200, jobs: Optional[int] = None) -> bool:
    words = oracle_corpus(maxlen, n_random=n_random)
    jobs = jobs or _threads()
    ok = True
    failures = []
    done = 0
    if jobs > 1:
        with Pool(jobs) as pool:
            for s, good in pool.imap_unordered(_oracle_case, words, chunksize=16):
                done += 1
                if not good:
                    failures.append(s)
                    ok = False
    else:
        for s in words:
            _s, good = _oracle_case(s)
            done += 1
            if not good:
                failures.append(s)
                ok = False
    _report(f"oracle corpus maxlen={maxlen} ({done} words)", ok,
            failures=failures[:10])
    return ok


def cmd_verify(args) -> int:
    suite = args.suite
    ok = True
    if suite in ("torus", "all"):
        ok &= verify_torus(args.kmax)
    if suite in ("omega5", "all"):
        ok &= verify_omega5(min(args.kmax, 2), args.lmax)
    if suite in ("omega4", "all"):
        ok &= verify_omega4(min(args.kmax, 2), args.lmax)
    if suite in ("omega6", "all"):
        ok &= verify_omega6(min(args.kmax, 2))
    if suite in ("torsion", "all"):
        ok &= verify_torsion()
    if suite in ("knight", "all"):
        ok &= verify_knight()
    if suite == "oracle":
        ok &= verify_oracle(args.maxlen, n_random=args.random)
    return EXIT_OK if ok else EXIT_CLAIM_FAILED


# ---------------------------------------------------------------------------
# sweep


def _sweep_one(s: str) -> dict:
    w = parse_word(s)
    meta = closure_meta(w)
    A = full_pipeline(w)
    unred = specialize_unreduced(A)
    groups = homology(unred)
    dims = field_dims(unred, 0)
    knight, _ = knight_move_check(dims, meta.components)
    return {
        "word": s,
        "components": meta.components,
        "writhe": meta.writhe,
        "total_rank": groups.total_rank(),
        "torsion_orders": sorted({t for _i, _j, t in groups.torsion_factors()}),
        "knight_move": knight,
        "groups": groups.to_json_obj(),
        "euler": {str(e): c for e, c in euler_characteristic(unred).terms.items()},
    }


def cmd_sweep(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        lines = read_word_file(args.wordfile)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE_ERROR
    summary_rows = []
    for lineno, raw, w, err in lines:
        if err is not None:
            print(f"line {lineno}: {err}", file=sys.stderr)
            summary_rows.append({"word": raw, "error": err})
            continue
        result = _sweep_one(str(w))
        name = f"word_{lineno:04d}.json"
        (outdir / name).write_text(json.dumps(result, indent=1), encoding="utf-8")
        summary_rows.append({
            "word": result["word"],
            "components": result["components"],
            "total_rank": result["total_rank"],
            "torsion_orders": ";".join(map(str, result["torsion_orders"])),
            "knight_move": result["knight_move"],
        })
        print(json.dumps({"line": lineno, "word": result["word"], "file": name}))
    fields = ["word", "components", "total_rank", "torsion_orders", "knight_move", "error"]
    with open(outdir / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in summary_rows:
            writer.writerow(row)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kh3", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="homology of one braid closure")
    c.add_argument("--word", help="braid word over a, A, b, B (power syntax ok)")
    c.add_argument("--class", dest="cls", choices=[f"omega{i}" for i in range(7)],
                   help="Murasugi normal-form family")
    c.add_argument("--k", type=int, default=0)
    c.add_argument("--l", type=int, default=None)
    c.add_argument("--alt", help="comma-separated exponents n1,m1,... for omega6")
    c.add_argument("--ring", choices=["Z", "Q", "F2"], default="Z")
    c.add_argument("--reduced", action="store_true")
    c.add_argument("--output", choices=["table", "json"], default="table")
    c.add_argument("--oracle", action="store_true",
                   help="also run the cube-of-resolutions oracle and compare")
    c.set_defaults(func=cmd_compute)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=["torus", "omega4", "omega5", "omega6",
                                     "torsion", "knight", "oracle", "all"])
    v.add_argument("--kmax", type=int, default=3)
    v.add_argument("--lmax", type=int, default=4)
    v.add_argument("--maxlen", type=int, default=8)
    v.add_argument("--random", type=int, default=200)
    v.add_argument("--grid", default="default", choices=["default"])
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="process a file of words")
    s.add_argument("wordfile")
    s.add_argument("outdir")
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
