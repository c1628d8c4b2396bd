"""Command-line front end. JSON payloads go to stdout, diagnostics to stderr."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, CertificationError, InfeasibleError, RectEmbedError
from .rect import parse_dims

OK, NEGATIVE, USAGE, CAPACITY = 0, 1, 2, 3


@dataclass
class CommandResult:
    exit_code: int
    payload: object = None
    text: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _Usage(f"{self.prog}: error: {message}\n{self.format_usage()}")


class _Usage(Exception):
    pass


def _dims(text):
    try:
        return parse_dims(text)
    except (RectEmbedError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _per_axis(samples, n):
    return None if samples is None else max(2, math.ceil(samples ** (1.0 / n) - 1e-9))


def cmd_feasible(a):
    from .feasibility import check_inequalities

    rep = check_inequalities(a.S, a.R, a.k, a.constant)
    return CommandResult(OK if rep.passed else NEGATIVE, rep.to_json())


def cmd_bound(a):
    from .feasibility import dilation_lower_bound, dilation_lower_bound_degree

    b = dilation_lower_bound(a.S, a.R, a.k) if a.degree == 1 else dilation_lower_bound_degree(a.S, a.R, a.k, a.degree)
    return CommandResult(OK, b.to_json())


def _map_summary(m):
    return {"stages": [s.kind for s in m.stages], "domain": list(m.domain), "codomain": list(m.codomain)}


def cmd_construct(a):
    from .embedding import construct_embedding, save_map, verify_k_expanding

    try:
        m = construct_embedding(a.S, a.R, a.k, margin=a.margin, certify=False)
    except InfeasibleError as exc:
        return CommandResult(NEGATIVE, {"error": str(exc), "violations": [v.to_json() for v in exc.violations]})
    rep = verify_k_expanding(m, a.k, _per_axis(a.samples, a.S.n))
    if a.out:
        save_map(m, a.out)
    return CommandResult(OK if rep.passed else NEGATIVE, {**_map_summary(m), "certificate": rep.to_json()})


def cmd_verify(a):
    from .embedding import load_map, verify_k_expanding

    m = load_map(a.map)
    rep = verify_k_expanding(m, a.k, _per_axis(a.samples, len(m.domain)))
    return CommandResult(OK if rep.passed else NEGATIVE, rep.to_json())


def cmd_profile(a):
    from .isoperimetry import profile_sweep

    dims = a.R.dims
    lo = math.log10(dims[0] ** a.k) - 2
    hi = math.log10(math.prod(dims[: a.k])) + 1
    vols = np.logspace(lo, hi, a.samples or 50)
    pts = profile_sweep(a.R, a.k, [float(v) for v in vols], C=a.constant)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["V", "j", "rho", "bound", "regime"])
    for p in pts:
        w.writerow(p.to_row())
    if a.csv:
        with open(a.csv, "w", newline="") as fh:
            fh.write(buf.getvalue())
        return CommandResult(OK, {"rows": len(pts), "csv": a.csv})
    return CommandResult(OK, text=buf.getvalue())


def cmd_fill(a):
    from .chains import CubicalGrid, fill_relative_cycle, minimal_filling_oracle, random_relative_cycle, volume
    from .constants import C_IMPL

    grid = CubicalGrid.uniform(a.R.dims, a.cells)
    rng = np.random.default_rng(a.seed)
    z = random_relative_cycle(grid, a.k, rng)
    res = fill_relative_cycle(z, grid)
    payload = {"cycle": z.to_json(), "filling": res.chain.to_json(), "cycle_volume": res.cycle_volume,
               "filling_volume": res.volume, "profile_bound": res.profile_bound}
    ok = res.profile_bound is None or res.volume <= C_IMPL * res.profile_bound
    if a.oracle:
        orc = minimal_filling_oracle(z, grid)
        payload["oracle_volume"] = orc.min_volume
        payload["oracle_method"] = orc.method
        ok = ok and orc.min_volume <= volume(res.chain, grid) + 1e-9
    if a.out:
        with open(a.out, "w") as fh:
            json.dump({"grid": grid.to_json(), **payload}, fh)
    return CommandResult(OK if ok else NEGATIVE, payload)


def _demo_complex(a):
    from .complexes import generate_test_complex

    n = a.R.n
    cells = tuple(4 * max(1, round(r)) for r in a.R.dims)
    return generate_test_complex("random_small", R=a.R.dims, S=a.S.dims, target_cells=cells, seed=a.seed, D=a.degree)


def cmd_tighten_demo(a):
    from .complexes import degree, sweepout_scenario, tighten

    if a.fold:
        rep = sweepout_scenario(a.fold, delta=a.delta)
        ok = rep.degree_after == rep.degree_before and rep.glued_volume <= rep.v_bound and rep.tracking <= 4
        return CommandResult(OK if ok else NEGATIVE, rep.to_json())
    c = _demo_complex(a)
    k = a.k if a.k is not None else c.param.n - 1
    res = tighten(c, k, a.delta)
    d0, d1 = degree(c), degree(res.complex)
    faces = [{"face": [list(f.face.base), list(f.face.dirs)], "p": f.p, "volume": f.volume, "threshold": f.threshold}
             for f in res.faces]
    payload = {"degree_before": d0, "degree_after": d1, "worst_schedule_ratio": res.worst_ratio, "faces": faces}
    if a.out:
        with open(a.out, "w") as fh:
            json.dump(res.complex.to_json(), fh)
    return CommandResult(OK if d0 == d1 else NEGATIVE, payload)


def cmd_homotopy_demo(a):
    from .complexes import CycleComplex, build_homotopy, degree, tighten

    c = _demo_complex(a)
    if a.against == "zero":
        other = CycleComplex(c.param, c.target, {})
    else:
        other = tighten(c, a.k if a.k is not None else c.param.n - 1, a.delta).complex
    h = build_homotopy(c, other)
    payload = {
        "success": h.success,
        "degrees": [degree(c), degree(other)],
        "prism_faces": len(h.prisms),
        "threshold_violations": len(h.threshold_violations),
    }
    if not h.success:
        F = h.failure_face
        payload.update({"failure_face": [list(F.base), list(F.dirs)], "failure_dimension": h.failure_dimension,
                        "obstruction": h.obstruction, "obstruction_volume": h.obstruction_volume})
    return CommandResult(OK if h.success else NEGATIVE, payload)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="rectembed", description="k-expanding embeddings of rectangles and discrete cycle tools")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, k_required=True, rects=("S", "R")):
        sp.add_argument("--k", type=int, required=k_required)
        for r in rects:
            sp.add_argument(f"--{r}", type=_dims, required=True)

    sp = sub.add_parser("feasible", help="check the inequality system")
    common(sp)
    sp.add_argument("--constant", type=float, default=1.0)
    sp.set_defaults(func=cmd_feasible)

    sp = sub.add_parser("bound", help="lower bound on k-dilation")
    common(sp)
    sp.add_argument("--degree", type=int, default=1)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("construct", help="build and certify an embedding")
    common(sp)
    sp.add_argument("--margin", type=float, default=16.0)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("verify", help="re-certify a saved map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--samples", type=int)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("profile", help="CSV sweep of the isoperimetric profile")
    common(sp, rects=("R",))
    sp.add_argument("--constant", type=float, default=1.0)
    sp.add_argument("--samples", type=int)
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("fill", help="fill a random relative cycle")
    common(sp, rects=("R",))
    sp.add_argument("--cells", type=int, default=3)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--oracle", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_fill)

    for name, func in (("tighten-demo", cmd_tighten_demo), ("homotopy-demo", cmd_homotopy_demo)):
        sp = sub.add_parser(name)
        sp.add_argument("--k", type=int)
        sp.add_argument("--S", type=_dims, default=parse_dims("2,2,2"))
        sp.add_argument("--R", type=_dims, default=parse_dims("2,2,3"))
        sp.add_argument("--degree", type=int, default=1)
        sp.add_argument("--delta", type=float, default=0.5)
        sp.add_argument("--seed", type=int, default=0)
        if name == "tighten-demo":
            sp.add_argument("--fold", type=int, default=0)
            sp.add_argument("--out")
        else:
            sp.add_argument("--against", choices=("tightened", "zero"), default="tightened")
        sp.set_defaults(func=func)
    return p


def run(argv) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
    except _Usage as exc:
        return CommandResult(USAGE, {"error": str(exc)})
    except SystemExit as exc:  # --help
        return CommandResult(int(exc.code or 0))
    try:
        return args.func(args)
    except CapacityError as exc:
        return CommandResult(CAPACITY, {"error": str(exc)})
    except CertificationError as exc:
        return CommandResult(NEGATIVE, {"error": str(exc)})
    except (RectEmbedError, ValueError, OSError) as exc:
        return CommandResult(USAGE, {"error": f"{type(exc).__name__}: {exc}"})


def main(argv=None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    if res.exit_code in (USAGE, CAPACITY) and isinstance(res.payload, dict):
        print(res.payload.get("error", ""), file=sys.stderr)
    elif res.text is not None:
        sys.stdout.write(res.text)
    elif res.payload is not None:
        print(json.dumps(res.payload, sort_keys=True))
    return res.exit_code


if __name__ == "__main__":
    sys.exit(main())
