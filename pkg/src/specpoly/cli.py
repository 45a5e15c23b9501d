"""Command-line front end: ``specpoly <subcommand> --p P [--e E] ...``.

Exit codes: 0 success, 1 usage error, 2 budget refusal, 3 theorem violation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .analysis import (
    DirichletSpec,
    VerifyConfig,
    beta_grid,
    degree_invariance_check,
    dirichlet_specialize,
    field_create_ext,
    grid_row,
    rows_to_csv,
    trivial_zero_report,
    verify_field,
)
from .digits import DigitPerm, PermutationError
from .field import FieldCtx, FieldError, FqElem, field_create
from .polyring import DEFAULT_BUDGET, BudgetExceeded, degree_in_t0, pretty
from .special import CACHE_ENV, TheoremViolation, cached_z, phi_degree

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VIOLATION = 0, 1, 2, 3

EXAMPLES = {
    "compute": "specpoly compute --p 3 --betas 1,1 --method both",
    "degree": "specpoly degree --p 3 --betas 5",
    "zeros": "specpoly zeros --p 5 --betas 1,3",
    "permute": "specpoly permute --p 3 --betas 5 --perms 0:1,1:0",
    "verify": "specpoly verify --q 2,3",
    "sweep": "specpoly sweep --p 3 --s-max 2 --beta-max 4",
    "dirichlet": "specpoly dirichlet --p 3 --m 2 --lambdas 0,1 --betas 1 --beta 1",
}


class UsageError(Exception):
    def __init__(self, flag: str, msg: str, sub: str | None = None):
        self.flag, self.msg, self.sub = flag, msg, sub
        super().__init__(f"{flag}: {msg}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sub = self.prog.split()[-1] if len(self.prog.split()) > 1 else None
        raise UsageError("arguments", message, sub)


# --- flag parsing ----------------------------------------------------------------

def _int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None
    return vals


def _betas(args, flag="--betas", allow_empty=False) -> tuple[int, ...]:
    if args.betas is None:
        if allow_empty:
            return ()
        raise UsageError(flag, "required")
    vals = _int_list(args.betas, flag)
    if not vals and not allow_empty:
        raise UsageError(flag, "needs at least one exponent")
    if any(v < 0 for v in vals):
        raise UsageError(flag, f"exponents must be non-negative, got {args.betas!r}")
    return vals


def _field(args) -> FieldCtx:
    if args.p is None:
        raise UsageError("--p", "required")
    try:
        return field_create(args.p, args.e)
    except FieldError as exc:
        raise UsageError("--p/--e", str(exc)) from None


def _perms(text: str | None, count: int) -> list[DigitPerm]:
    if text is None:
        raise UsageError("--perms", "required")
    parts = text.split(";")
    try:
        perms = [DigitPerm.parse(x.strip()) for x in parts]
    except (PermutationError, ValueError) as exc:
        raise UsageError("--perms", str(exc)) from None
    if len(perms) == 1:
        perms = perms * count
    if len(perms) != count:
        raise UsageError("--perms", f"{len(perms)} permutations for {count} exponents")
    return perms


def _lambdas(text: str | None, ext: FieldCtx) -> tuple[FqElem, ...]:
    if text is None or text.strip() == "":
        return ()
    out = []
    for part in text.split(";"):
        coords = _int_list(part, "--lambdas")
        if len(coords) > ext.e or any(not 0 <= c < ext.p for c in coords):
            raise UsageError("--lambdas", f"{part!r} is not a coordinate vector of F_{ext.q} over F_{ext.p}")
        coords = coords + (0,) * (ext.e - len(coords))
        out.append(FqElem.from_code(ext.code(coords), ext))
    return tuple(out)


def _field_json(ctx: FieldCtx) -> dict:
    return {"p": ctx.p, "e": ctx.e, "q": ctx.q, "modulus": list(ctx.modulus)}


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# --- subcommands ----------------------------------------------------------------------

def cmd_compute(args, out):
    ctx = _field(args)
    betas = _betas(args)
    methods = ["direct", "via_ones"] if args.method == "both" else [args.method]
    results = []
    for m in methods:
        if m == "direct" and args.d_max is not None:
            from .special import z_direct

            results.append(z_direct(betas, ctx, d_max=args.d_max, budget=args.budget))
        else:
            results.append(cached_z(betas, ctx, m, args.cache_dir, budget=args.budget))
    if len(results) == 2 and results[0].poly != results[1].poly:
        raise TheoremViolation(f"direct and via_ones disagree for {betas}")
    if args.format == "json":
        out.write(_dump({"field": _field_json(ctx), "results": [r.to_json() for r in results]}) + "\n")
    else:
        for r in results:
            out.write(f"[{r.provenance}] {pretty(r.poly)}\n")


def cmd_degree(args, out):
    ctx = _field(args)
    betas = _betas(args)
    phi = phi_degree(betas, ctx)
    try:
        z = cached_z(betas, ctx, "direct", args.cache_dir, budget=args.budget)
        deg = int(degree_in_t0(z.poly)) if z.poly else None
        note = None
    except BudgetExceeded as exc:
        deg, note = None, f"over budget at d = {exc.d}"
    if deg is not None and deg != phi:
        raise TheoremViolation(f"computed degree {deg} != phi {phi} for {betas}")
    if args.format == "json":
        out.write(_dump({"field": _field_json(ctx), "betas": list(betas), "phi": phi,
                         "degree": deg, "note": note}) + "\n")
    else:
        out.write(f"phi = {phi}\n")
        out.write(f"computed degree = {deg if deg is not None else note}\n")


def cmd_zeros(args, out):
    ctx = _field(args)
    betas = _betas(args)
    z = cached_z(betas, ctx, args.method if args.method != "both" else "direct", args.cache_dir, args.budget)
    rep = trivial_zero_report(betas, ctx, z=z)
    if args.format == "json":
        d = rep.to_json()
        d["field"] = _field_json(ctx)
        out.write(_dump(d) + "\n")
    elif args.format == "csv":
        from .analysis import GridRow

        row = GridRow(ctx.q, rep.betas, rep.phi, rep.degree, rep.multiplicity, rep.predicted_zero, rep.status)
        out.write(rows_to_csv([row]))
    else:
        out.write(f"z{betas} over F_{ctx.q}: phi = {rep.phi}, degree = {rep.degree}\n")
        out.write(f"value at t0 = 1: {pretty(rep.value_at_one)}\n")
        out.write(f"multiplicity at t0 = 1: {rep.multiplicity} "
                  f"(predicted {'simple zero' if rep.predicted_zero else 'no zero'})\n")


def cmd_permute(args, out):
    ctx = _field(args)
    betas = _betas(args)
    if any(b < 1 for b in betas):
        raise UsageError("--betas", "permute needs positive exponents")
    perms = _perms(args.perms, len(betas))
    rep = degree_invariance_check(betas, perms, ctx, budget=args.budget)
    if args.format == "json":
        d = rep.to_json()
        d["field"] = _field_json(ctx)
        d["perms"] = [str(r) for r in perms]
        if rep.polys:
            d["polys"] = [P.to_json() for P in rep.polys]
        out.write(_dump(d) + "\n")
    else:
        out.write(f"{betas} -> {rep.permuted} over F_{ctx.q}\n")
        out.write(f"phi: {rep.phi_before} -> {rep.phi_after}\n")
        if rep.level == "computed":
            out.write(f"degree: {rep.degree_before} -> {rep.degree_after}\n")
        out.write(f"check: {rep.level}, {rep.status}\n")


def _verify_job(job):
    p, e, cfg = job
    return [r.to_json() | {"line": r.line()} for r in verify_field(field_create(p, e), cfg)]


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, n = 0, q
            while n % p == 0:
                n //= p
                e += 1
            if n != 1:
                break
            return p, e
    raise UsageError("--q", f"{q} is not a prime power")


def _jobs(args) -> int:
    return args.jobs if args.jobs is not None else (os.cpu_count() or 1)


def _fan_out(fn, jobs, n_jobs):
    if n_jobs <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(fn, jobs))


def cmd_verify(args, out):
    qs = _int_list(args.q, "--q")
    if not qs:
        raise UsageError("--q", "needs at least one field order")
    cfg = VerifyConfig(s_max=args.s_max, beta_max=args.beta_max, budget=args.budget, seed=args.seed)
    jobs = [(*_prime_power(q), cfg) for q in qs]
    results = _fan_out(_verify_job, jobs, _jobs(args))
    flat = [r for rs in results for r in rs]
    if args.format == "json":
        out.write(_dump({"checks": [{k: v for k, v in r.items() if k != "line"} for r in flat]}) + "\n")
    else:
        for r in flat:
            out.write(r["line"] + "\n")
    bad = [r for r in flat if not r["ok"]]
    if bad:
        raise TheoremViolation("; ".join(f"{r['name']}: {r['failures'][0]}" for r in bad))


def _sweep_job(job):
    p, e, betas, budget = job
    return grid_row(betas, field_create(p, e), method="direct", budget=budget)


def cmd_sweep(args, out):
    ctx = _field(args)
    jobs = [(ctx.p, ctx.e, b, args.budget) for b in beta_grid(args.s_max, args.beta_max)]
    rows = _fan_out(_sweep_job, jobs, _jobs(args))
    if args.format == "json":
        out.write(_dump({"field": _field_json(ctx), "rows": [r.to_json() for r in rows]}) + "\n")
    else:
        out.write(rows_to_csv(rows))
    if any(r.status in ("violation", "degree-mismatch") for r in rows):
        raise TheoremViolation("sweep found rows contradicting the theorems")


def cmd_dirichlet(args, out):
    ctx = _field(args)
    if args.m < 1:
        raise UsageError("--m", f"extension degree must be positive, got {args.m}")
    ext = field_create_ext(ctx, args.m)
    lams = _lambdas(args.lambdas, ext)
    exps = _betas(args, allow_empty=True)
    if len(exps) != len(lams):
        raise UsageError("--betas", f"{len(lams)} lambdas but {len(exps)} exponents")
    if args.beta < 0:
        raise UsageError("--beta", "must be non-negative")
    spec = DirichletSpec(lams, exps, args.beta)
    method = {"direct": "direct", "via_ones": "substitute", "both": "both"}[args.method]
    res = dirichlet_specialize(spec, ctx, ext, method=method, budget=args.budget)
    if args.format == "json":
        d = res.to_json()
        d["base_field"] = _field_json(ctx)
        d["lambdas"] = [list(ext.vec(x.code)) for x in lams]
        out.write(_dump(d) + "\n")
    else:
        names = ["t0", "theta"]
        out.write(f"[{res.provenance}] over F_{ext.q}: {pretty(res.poly, names)}\n")
        out.write(f"value at t0 = 1: {pretty(res.poly.eval_t0(1), names)}\n")


COMMANDS = {
    "compute": cmd_compute,
    "degree": cmd_degree,
    "zeros": cmd_zeros,
    "permute": cmd_permute,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "dirichlet": cmd_dirichlet,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="specpoly", description="Special polynomials z(beta_1, ..., beta_s, t0) over F_q.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    env_cache = os.environ.get(CACHE_ENV)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name != "verify":
            sp.add_argument("--p", type=int, help="characteristic")
            sp.add_argument("--e", type=int, default=1, help="q = p^e")
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max polynomials per degree")
        sp.add_argument("--format", choices=["text", "json", "csv"],
                        default="csv" if name == "sweep" else "text")
        sp.add_argument("--cache-dir", default=env_cache, help=f"polynomial cache (default ${CACHE_ENV})")
        if name in ("compute", "degree", "zeros", "permute", "dirichlet"):
            sp.add_argument("--betas", help="comma-separated exponents, e.g. 1,2,5")
        if name in ("compute", "zeros", "dirichlet"):
            sp.add_argument("--method", choices=["direct", "via_ones", "both"],
                            default="both" if name == "dirichlet" else "direct")
        if name == "compute":
            sp.add_argument("--d-max", type=int, help="enumerate A+(d) up to this degree")
        if name == "permute":
            sp.add_argument("--perms", help="digit permutations, ';'-separated per exponent, e.g. 0:1,1:0;id")
        if name in ("verify", "sweep"):
            sp.add_argument("--s-max", type=int, default=3)
            sp.add_argument("--beta-max", type=int, default=4)
            sp.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
        if name == "verify":
            sp.add_argument("--q", default="2,3,4,5", help="field orders, e.g. 2,3,4")
            sp.add_argument("--seed", type=int, default=0)
        if name == "dirichlet":
            sp.add_argument("--m", type=int, default=1, help="extension degree of the lambdas")
            sp.add_argument("--lambdas", help="';'-separated F_p coordinates, constant first, e.g. 0,1;1,1")
            sp.add_argument("--beta", type=int, default=0, help="exponent of a itself")
    return parser


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    sub = argv[0] if argv and argv[0] in COMMANDS else None
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("command", f"choose one of {', '.join(COMMANDS)}")
        sub = args.command
        if args.budget < 1:
            raise UsageError("--budget", "must be positive")
        COMMANDS[sub](args, out)
        return EXIT_OK
    except UsageError as exc:
        sub = exc.sub or sub
        err.write(f"error: {exc.flag}: {exc.msg}\n")
        examples = [EXAMPLES[sub]] if sub in EXAMPLES else list(EXAMPLES.values())[:2]
        err.write("example: " + "\n         ".join(examples) + "\n")
        return EXIT_USAGE
    except BudgetExceeded as exc:
        err.write(f"budget refused: d = {exc.d}: {exc}\n")
        return EXIT_BUDGET
    except TheoremViolation as exc:
        err.write(f"THEOREM VIOLATION: {exc}\n")
        return EXIT_VIOLATION


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
