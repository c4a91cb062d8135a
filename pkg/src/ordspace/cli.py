"""Command-line front end.

Exit codes: 0 pass, 1 counterexample or refutation, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import checks
from .cones import IdentitySignError, PhiCone, cone_from_json, q_from_json
from .dynamics import e0_class, fingerprint, orbit_explore, tararin_cones, tinf_decode
from .groups import Group, Tararin, Wreath, group_from_json
from .sets import set_from_json
from .reductions import equivariance_suite, get_witness, is_sidon, sidon_prefix

DEFAULT_CAP = 6
WREATH_CAP = 4


class UsageError(Exception):
    pass


def radius_cap(group: Group | None) -> int:
    env = os.environ.get("ORDSPACE_MAX_RADIUS")
    if env:
        return int(env)
    return WREATH_CAP if isinstance(group, Wreath) else DEFAULT_CAP


def _check_radius(r: int, group: Group | None) -> int:
    cap = radius_cap(group)
    if r < 0 or r > cap:
        raise UsageError(f"radius {r} outside 0..{cap} (set ORDSPACE_MAX_RADIUS to raise the cap)")
    return r


def _load(text: str | None, what: str):
    if text is None:
        raise UsageError(f"--{what} is required")
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"--{what}: malformed JSON ({e})") from e


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ordspace-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _group_and_cone(args):
    cone = cone_from_json(_load(args.cone, "cone")) if args.cone else None
    if cone is None and args.set_:
        cone = PhiCone(set_from_json(_load(args.set_, "set")))
    group = group_from_json(_load(args.group, "group")) if args.group else (cone.group if cone else None)
    return group, cone


def cmd_sign(args) -> int:
    group, cone = _group_and_cone(args)
    g = group.parse(args.element)
    try:
        s = cone.sign(g)
    except IdentitySignError as e:
        raise UsageError(str(e)) from e
    print(f"{s:+d}")
    return 0


def cmd_check(args) -> int:
    group, cone = _group_and_cone(args)
    sub = q_from_json(_load(args.subgroup, "subgroup")) if args.subgroup else None
    if group is None and sub is not None:
        group = sub.ambient
    if group is None:
        raise UsageError("need --group, --cone or --subgroup")
    r = _check_radius(args.radius, group)
    name = args.name

    def need(x, flag):
        if x is None:
            raise UsageError(f"check {name} needs --{flag}")
        return x

    if name == "axioms":
        rep = checks.axioms_check(need(cone, "cone"), group, r)
    elif name == "qconds":
        rep = checks.q_conditions_check(need(sub, "subgroup"), group, r)
    elif name == "conradian":
        rep = checks.conradian_probe(need(cone, "cone"), group, r, args.bound or 2)
    elif name == "convexity":
        rep = checks.convexity_check(need(sub, "subgroup"), need(cone, "cone"), group, r)
    elif name == "biinvariance":
        rep = checks.biinvariance_check(need(cone, "cone"), group, r)
    elif name == "malnormality":
        rep = checks.malnormality_probe(need(sub, "subgroup"), group, r)
    else:
        raise UsageError(f"unknown check {name!r}")
    emit(dumps(rep.to_dict()), args.out)
    return 0 if rep.passed else 1


def cmd_orbit(args) -> int:
    group, cone = _group_and_cone(args)
    if cone is None:
        raise UsageError("orbit needs --cone")
    r = _check_radius(args.radius, group)
    graph = orbit_explore(cone, group, r, args.bound or 64)
    if args.out:
        stem = args.out[:-5] if args.out.endswith(".json") else args.out
        write_atomic(stem + ".json", dumps(graph.to_json()))
        write_atomic(stem + ".dot", graph.to_dot())
    elif args.format == "json":
        sys.stdout.write(dumps(graph.to_json()))
    elif args.format == "dot":
        sys.stdout.write(graph.to_dot())
    print(graph.summary(), file=sys.stderr if args.format in ("json", "dot") and not args.out else sys.stdout)
    if isinstance(group, Tararin) and group.n is None and graph.status == "closed":
        m = group.span - 1
        eps = tinf_decode(cone, m)
        # at radius >= 1 the generators lead the ball, so these bits are their signs
        orbit = {tuple(n.bits[:m]) for n in graph.nodes}
        same = orbit == e0_class(eps, m)
        print(f"orbit equals the eventual-equality class at level {m}: {same}")
    return 0


def cmd_reduce(args) -> int:
    try:
        w = get_witness(args.name)
    except KeyError as e:
        raise UsageError(e.args[0]) from e
    r = _check_radius(args.radius if args.radius is not None else w.radius, w.target_group)
    rep = equivariance_suite(w, w.samples(args.bound or 32, args.seed), r)
    if args.format == "text" and not args.out:
        print(f"{w.name}: {rep.status} ({len(rep.results)} samples, {rep.failures} failures, radius {r})")
    else:
        emit(dumps(rep.to_dict()), args.out)
    return 0 if rep.passed else 1


def cmd_tararin_enumerate(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("n must be positive")
    group = Tararin(n)
    r = _check_radius(args.radius, group)
    rows = [{"signs": list(c.signs), "fingerprint": fingerprint(c, group, r).hex()} for c in tararin_cones(n)]
    distinct = len({row["fingerprint"] for row in rows})
    if args.format == "json":
        emit(dumps({"n": n, "radius": r, "cones": rows, "distinct": distinct}), args.out)
    else:
        lines = ["".join("+" if s > 0 else "-" for s in row["signs"]) + "  " + row["fingerprint"] for row in rows]
        lines.append(f"{len(rows)} cones, {distinct} distinct fingerprints")
        emit("\n".join(lines) + "\n", args.out)
    return 0 if distinct == 2**n else 1


def cmd_sidon(args) -> int:
    k = args.bound or 5
    C = sidon_prefix(k)
    if args.format == "json":
        emit(dumps({"k": k, "prefix": list(C), "sidon": is_sidon(C)}), args.out)
    else:
        emit(" ".join(map(str, C)) + "\n", args.out)
    return 0 if is_sidon(C) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ordspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, radius=2):
        sp.add_argument("--group", help="group descriptor JSON (or @file)")
        sp.add_argument("--cone", help="cone descriptor JSON (or @file)")
        sp.add_argument("--set", dest="set_", help="set descriptor JSON (or @file)")
        sp.add_argument("--radius", type=int, default=radius)
        sp.add_argument("--bound", type=int, help="N, max_nodes, k or sample count, by command")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", help="output path (written atomically)")
        sp.add_argument("--format", choices=("json", "dot", "text"), default="text")

    sp = sub.add_parser("sign", help="evaluate a cone on an element")
    common(sp)
    sp.add_argument("element")
    sp.set_defaults(func=cmd_sign)

    sp = sub.add_parser("check", help="run a checker on a ball")
    common(sp, radius=3)
    sp.add_argument("name", choices=("axioms", "qconds", "conradian", "convexity", "biinvariance", "malnormality"))
    sp.add_argument("--subgroup", help="subgroup/Q descriptor JSON (or @file)")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("orbit", help="explore a conjugation orbit")
    common(sp)
    sp.set_defaults(func=cmd_orbit)

    sp = sub.add_parser("reduce", help="run the equivariance suite on a witness")
    common(sp)
    sp.set_defaults(radius=None, func=cmd_reduce)
    sp.add_argument("name", help="witness name, optionally name:arg")

    sp = sub.add_parser("tararin-enumerate", help="list the 2^n Tararin cones")
    common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_tararin_enumerate)

    sp = sub.add_parser("sidon", help="print the greedy Sidon prefix of length --bound")
    common(sp)
    sp.set_defaults(func=cmd_sidon)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, TypeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
