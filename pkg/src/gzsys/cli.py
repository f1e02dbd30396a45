"""Command-line interface.

Exit codes: 0 ok/true, 1 false, 2 bad input, 3 numerical failure,
4 internal-consistency alarm.
"""

import argparse
import csv
import json
import statistics
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import formats, korbits, nilfiber
from .errors import ConsistencyError, ConvergenceError, NumericalError, PreconditionError
from .flows import FlowTimes, a_action
from .gzmap import Coords, RitzData, fibers_equal, kw_map, ritz_values
from .hessenberg import hessenberg_from_coeffs, hessenberg_from_ritz
from .numlin import Tolerance
from .sreg import samples_until_sreg, sreg_report

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_NUMERIC, EXIT_ALARM = 0, 1, 2, 3, 4


class Output:
    """A result in three renderings: a JSON object, a CSV table and text lines."""

    def __init__(self, data, header=None, rows=None, text=None, code=EXIT_OK):
        self.data = data
        self.header = header
        self.rows = rows or []
        self.text = text or []
        self.code = code

    def write(self, fmt, stream):
        if fmt == "json":
            stream.write(formats.dumps(self.data) + "\n")
        elif fmt == "csv":
            w = csv.writer(stream, lineterminator="\n")
            if self.header:
                w.writerow(self.header)
            w.writerows(self.rows)
        else:
            for line in self.text:
                stream.write(line + "\n")


def _fmt_c(z):
    z = complex(z)
    return f"{z.real:+.10g}{z.imag:+.10g}j"


def _fmt_levels(levels):
    return ["  level %d: %s" % (i, ", ".join(_fmt_c(v) for v in lvl)) for i, lvl in enumerate(levels, 1)]


def _matrix_text(m):
    return ["  [" + ", ".join(_fmt_c(v) for v in row) + "]" for row in m]


def _matrix_rows(m):
    return [[r + 1, c + 1, float(m[r, c].real), float(m[r, c].imag)] for r in range(m.shape[0]) for c in range(m.shape[1])]


MATRIX_HEADER = ["row", "col", "re", "im"]


def _substreams(seed, count):
    return np.random.SeedSequence(seed).spawn(count)


def _pmap(fn, items, workers):
    items = list(items)
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=workers or None) as pool:
        return list(pool.map(fn, items))


# --- commands ---------------------------------------------------------------


def cmd_ritz(args, tol):
    x = formats.read_matrix(args.file)
    r = ritz_values(x, tol)
    coeffs = kw_map(x, Coords.CHAR_COEFFS)
    traces = coeffs.to_traces()
    data = {
        "n": x.shape[0],
        "ritz": formats.encode_levels(r.sigma),
        "coeffs": formats.encode_levels(coeffs.levels),
        "traces": formats.encode_levels(traces.levels),
    }
    rows = []
    for i in range(1, x.shape[0] + 1):
        for j in range(i):
            s, c, t = r.sigma[i - 1][j], coeffs.levels[i - 1][j], traces.levels[i - 1][j]
            rows.append([i, j + 1, s.real, s.imag, c.real, c.imag, t.real, t.imag])
    text = ["ritz values:"] + _fmt_levels(r.sigma)
    text += ["char coefficients (ascending, monic term omitted):"] + _fmt_levels(coeffs.levels)
    text += ["traces of powers:"] + _fmt_levels(traces.levels)
    header = ["level", "index", "ritz_re", "ritz_im", "coeff_re", "coeff_im", "trace_re", "trace_im"]
    return Output(data, header, rows, text)


def _write_matrix_file(path, m):
    with open(path, "w") as fh:
        fh.write(formats.dumps(formats.encode_matrix(m)) + "\n")


def cmd_invert(args, tol):
    target = formats.decode_spectra(formats.load_json(args.file))
    x = hessenberg_from_ritz(target) if isinstance(target, RitzData) else hessenberg_from_coeffs(target)
    if not np.all(np.isfinite(x)):
        raise NumericalError("Hessenberg construction overflowed")
    if args.output:
        _write_matrix_file(args.output, x)
    return Output(formats.encode_matrix(x), MATRIX_HEADER, _matrix_rows(x), ["hessenberg matrix:"] + _matrix_text(x))


def cmd_sreg(args, tol):
    x = formats.read_matrix(args.file)
    rep = sreg_report(x, tol)
    data = rep.as_dict()
    code = EXIT_OK if rep.is_sreg else EXIT_FALSE
    text = [
        f"strongly regular: {rep.is_sreg}",
        f"  gradient rank {rep.diff_rank} of {rep.n * (rep.n + 1) // 2}",
        f"  field rank {rep.tangent_rank} of {rep.n * (rep.n - 1) // 2}",
        f"  levels regular: {rep.per_level_regular}",
        f"  joint centralizer dims: {rep.centralizer_intersection_dims}",
    ]
    if not rep.consistent:
        code = EXIT_ALARM
        text.append(
            "ALARM: tests disagree (differentials=%s, fields=%s, centralizers=%s)"
            % (rep.differentials_verdict, rep.tangent_verdict, rep.centralizer_verdict)
        )
        sys.stderr.write(text[-1] + "\n")
    rows = [[k, v] for k, v in sorted(data.items())]
    return Output(data, ["field", "value"], rows, text, code)


def _read_times(args, n):
    if args.times is None:
        return FlowTimes.random(n, np.random.default_rng(args.seed), args.time_scale)
    if args.times.lstrip().startswith("["):
        try:
            obj = json.loads(args.times)
        except json.JSONDecodeError as exc:
            raise formats.FormatError(f"--times: invalid JSON ({exc})") from exc
    else:
        obj = formats.load_json(args.times)
    if not isinstance(obj, list):
        raise formats.FormatError("--times must be a list of [re, im] pairs in (i, j) order")
    return FlowTimes.from_flat(n, [formats.decode_complex(p) for p in obj])


def cmd_flow(args, tol):
    x = formats.read_matrix(args.file)
    n = x.shape[0]
    if n < 2:
        raise PreconditionError("flows need n >= 2")
    times = _read_times(args, n)
    y = a_action(x, times, tol=tol)
    preserved = fibers_equal(x, y, tol)
    data = formats.encode_matrix(y)
    data["times"] = formats.encode_vector(times.flat())
    data["fiber_preserved"] = preserved
    if args.output:
        _write_matrix_file(args.output, y)
    text = ["flowed matrix:"] + _matrix_text(y) + [f"fiber preserved: {preserved}"]
    return Output(data, MATRIX_HEADER, _matrix_rows(y), text, EXIT_OK if preserved else EXIT_ALARM)


def _sample_one(item):
    sign, seq = item
    return nilfiber.sample_component(nilfiber.SignSequence.parse(sign), np.random.default_rng(seq))


def cmd_nilfiber(args, tol):
    n = args.n
    if args.action == "enumerate":
        comps = nilfiber.enumerate_components(n)
        data = {
            "n": n,
            "count": len(comps),
            "components": [
                {"signs": str(q), "order": list(p.sigma), "pattern": p.render(), "simple_positions": [list(s) for s in p.simple_positions]}
                for q, p in comps
            ],
        }
        rows = [[str(q), " ".join(map(str, p.sigma)), "/".join(p.render())] for q, p in comps]
        text = [f"{len(comps)} components"]
        for q, p in comps:
            text.append(f"{q or '(empty)'}  order {' '.join(map(str, p.sigma))}")
            text += ["    " + r for r in p.render()]
        return Output(data, ["signs", "order", "pattern"], rows, text)
    if args.action == "sample":
        if args.sign is not None:
            q = nilfiber.SignSequence.parse(args.sign)
            if q.n != n:
                raise PreconditionError(f"sign sequence must have length {n - 1}")
            signs = [str(q)] * args.count
        else:
            signs = [str(q) for q in nilfiber.all_sign_sequences(n) for _ in range(args.count)]
        mats = _pmap(_sample_one, zip(signs, _substreams(args.seed, len(signs))), args.parallel)
        data = {"n": n, "samples": [dict(formats.encode_matrix(m), signs=s) for s, m in zip(signs, mats)]}
        rows = [[k + 1, s] + r for k, (s, m) in enumerate(zip(signs, mats)) for r in _matrix_rows(m)]
        text = []
        for s, m in zip(signs, mats):
            text += [f"component {s}:"] + _matrix_text(m)
        return Output(data, ["sample", "signs"] + MATRIX_HEADER, rows, text)
    # classify
    x = formats.read_matrix(args.file)
    if x.shape[0] != n:
        raise PreconditionError(f"matrix is {x.shape[0]}x{x.shape[0]}, expected n={n}")
    q = nilfiber.component_membership(x, tol)
    data = {"n": n, "component": None if q is None else str(q)}
    text = [f"component: {q if q is not None else 'none'}"]
    return Output(data, ["component"], [[data["component"] or ""]], text, EXIT_OK if q is not None else EXIT_FALSE)


def _orbit_arg(args, n):
    if not args.orbit:
        raise PreconditionError("--orbit is required")
    return korbits.OrbitId.parse(args.orbit).check(n)


def cmd_korbit(args, tol):
    n = args.n
    if args.action == "list":
        infos = korbits.enumerate_orbits(n)
        data = {
            "n": n,
            "count": len(infos),
            "orbits": [{"id": str(o.orbit), "length": o.length, "dimension": o.dimension, "closed": o.orbit.closed} for o in infos],
        }
        rows = [[str(o.orbit), o.length, o.dimension] for o in infos]
        text = [f"{len(infos)} orbits"] + [f"  {o.orbit}: length {o.length}, dimension {o.dimension}" for o in infos]
        return Output(data, ["orbit", "length", "dimension"], rows, text)
    if args.action == "classify":
        basis = formats.read_matrix(args.file)
        if basis.shape[0] != n:
            raise PreconditionError(f"flag basis is {basis.shape[0]}x{basis.shape[0]}, expected n={n}")
        o = korbits.classify_flag(korbits.Flag(basis), tol)
        a, b = korbits.flag_invariants(korbits.Flag(basis), tol)
        data = {"n": n, "orbit": str(o), "a": a, "b": b}
        return Output(data, ["orbit", "a", "b"], [[str(o), a, b]], [f"orbit: {o} (a={a}, b={b})"])
    if args.action == "monoid":
        rng = np.random.default_rng(args.seed)
        if args.orbit:
            pairs = [(_orbit_arg(args, n), args.k)] if args.k else [(_orbit_arg(args, n), k) for k in range(1, n)]
        else:
            pairs = [(o.orbit, k) for o in korbits.enumerate_orbits(n) for k in range(1, n)]
        entries = []
        code = EXIT_OK
        for o, k in pairs:
            combi = korbits.monoid_action(o, k, n)
            geo = korbits.monoid_action_geometric(o, k, n, rng, tol)
            if geo != combi:
                code = EXIT_ALARM
            entries.append({"orbit": str(o), "k": k, "result": str(combi), "geometric": str(geo), "agree": geo == combi})
        if code == EXIT_ALARM:
            sys.stderr.write("ALARM: geometric monoid action disagrees with the combinatorial rule\n")
        rows = [[e["orbit"], e["k"], e["result"], e["geometric"], e["agree"]] for e in entries]
        text = [f"m(s_{e['k']}) . {e['orbit']} = {e['result']}" + ("" if e["agree"] else f"  (geometric: {e['geometric']})") for e in entries]
        return Output({"n": n, "table": entries}, ["orbit", "k", "result", "geometric", "agree"], rows, text, code)
    # rep
    o = _orbit_arg(args, n)
    g = korbits.representative(o, n)
    flag = korbits.flag_representative(o, n)
    w = korbits.springer_invariant(g, tol)
    types = {str(korbits.simple_root(k)): korbits.root_type(o, korbits.simple_root(k)).value for k in range(1, n)}
    chain = [[str(src), k] for src, k in korbits.weak_order_chain(o)]
    data = {
        "n": n,
        "orbit": str(o),
        "group_element": formats.encode_matrix(g)["entries"],
        "flag_basis": formats.encode_matrix(flag.basis)["entries"],
        "springer_invariant": list(w),
        "simple_root_types": types,
        "length": korbits.orbit_length(o),
        "chain": chain,
        "classified_as": str(korbits.classify_flag(korbits.Flag.of(g), tol)),
    }
    text = [f"orbit {o}", "group element:"] + _matrix_text(g) + ["flag basis (columns):"] + _matrix_text(flag.basis)
    text += [f"springer invariant: {list(w)}", "simple root types:"] + [f"  {r}: {t}" for r, t in types.items()]
    rows = [[r, t] for r, t in types.items()]
    code = EXIT_OK if data["classified_as"] == str(o) else EXIT_ALARM
    return Output(data, ["root", "type"], rows, text, code)


def _borel_trial(item):
    n, seq, max_samples, abs_tol, rel_tol = item
    return samples_until_sreg(n, np.random.default_rng(seq), max_samples, Tolerance(abs_tol, rel_tol))


def cmd_borel_search(args, tol):
    n, trials = args.n, args.trials
    if n < 1 or trials < 1:
        raise PreconditionError("n and trials must be positive")
    items = [(n, s, args.max_samples, tol.abs_tol, tol.rel_tol) for s in _substreams(args.seed, trials)]
    counts = _pmap(_borel_trial, items, args.parallel)
    ok = [c for c in counts if c is not None]
    data = {
        "n": n,
        "trials": trials,
        "successes": len(ok),
        "samples_needed": counts,
        "median_samples": statistics.median(ok) if ok else None,
        "max_samples": args.max_samples,
    }
    rows = [[k + 1, "" if c is None else c] for k, c in enumerate(counts)]
    text = [f"{len(ok)}/{trials} Borel subalgebras gave a strongly regular element within {args.max_samples} samples"]
    if ok:
        text.append(f"median samples: {data['median_samples']}")
    return Output(data, ["trial", "samples"], rows, text, EXIT_OK if len(ok) == trials else EXIT_FALSE)


def cmd_acceptance(args, tol):
    from .acceptance import run_suite

    report = run_suite(args.seed)
    rows = [[c["id"], c["name"], c["passed"]] for c in report["criteria"]]
    text = [f"{'PASS' if c['passed'] else 'FAIL'} {c['id']:>2} {c['name']}" for c in report["criteria"]]
    return Output(report, ["id", "name", "passed"], rows, text, EXIT_OK if report["all_passed"] else EXIT_FALSE)


# --- parser -----------------------------------------------------------------


def _add_common(p, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="RNG seed (default 0)")
    p.add_argument("--abs-tol", type=float, default=d(1e-10), help="absolute tolerance (default 1e-10)")
    p.add_argument("--rel-tol", type=float, default=d(1e-9), help="relative tolerance (default 1e-9)")
    p.add_argument("--format", choices=["json", "csv", "pretty"], default=d("json"))
    p.add_argument("--parallel", type=int, default=d(1), help="worker processes for trial loops (0 = all cores)")


def _action_adder(sub):
    def add(name):
        p = sub.add_parser(name)
        _add_common(p, suppress=True)
        return p

    return add


def build_parser():
    parser = argparse.ArgumentParser(prog="gzsys", description="Gelfand-Zeitlin system computations on gl(n, C)")
    _add_common(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        _add_common(p, suppress=True)
        p.set_defaults(func=func)
        return p

    p = add("ritz", cmd_ritz, "Ritz values and Kostant-Wallach coordinates of a matrix")
    p.add_argument("file")
    p = add("invert", cmd_invert, "Hessenberg matrix with prescribed level spectra or coefficients")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p = add("sreg", cmd_sreg, "strong-regularity report (exit 0 if strongly regular, 1 if not)")
    p.add_argument("file")
    p = add("flow", cmd_flow, "apply the Gelfand-Zeitlin flows")
    p.add_argument("file")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--times", help="JSON list (or file) of [re, im] times in lexicographic (i, j) order")
    g.add_argument("--random-times", action="store_true", help="draw random times from --seed (the default)")
    p.add_argument("--time-scale", type=float, default=0.5, help="scale of random times when --times is absent")
    p.add_argument("-o", "--output")

    p = add("nilfiber", cmd_nilfiber, "components of the strongly regular nilfiber")
    p.add_argument("n", type=int)
    nsub = p.add_subparsers(dest="action", required=True)
    action = _action_adder(nsub)
    action("enumerate")
    s = action("sample")
    s.add_argument("--sign", help="sign sequence such as '+-+' (default: every component)")
    s.add_argument("--count", type=int, default=1)
    s = action("classify")
    s.add_argument("file")

    p = add("korbit", cmd_korbit, "K-orbits on the flag variety")
    p.add_argument("n", type=int)
    ksub = p.add_subparsers(dest="action", required=True)
    action = _action_adder(ksub)
    action("list")
    s = action("classify")
    s.add_argument("file", help="matrix file whose columns are the flag basis")
    s = action("monoid")
    s.add_argument("--orbit", help="e.g. 'Closed(2)' or 'Mixed(1,3)' (default: full table)")
    s.add_argument("--k", type=int, help="simple root index")
    s = action("rep")
    s.add_argument("--orbit", required=True)

    p = add("borel-search", cmd_borel_search, "sample random Borel subalgebras for strongly regular elements")
    p.add_argument("n", type=int)
    p.add_argument("trials", type=int)
    p.add_argument("--max-samples", type=int, default=5)

    add("acceptance", cmd_acceptance, "run the acceptance suite and report")
    return parser


def main(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.parallel < 0:
            raise PreconditionError("--parallel must be >= 0")
        tol = Tolerance(args.abs_tol, args.rel_tol)
        out = args.func(args, tol)
    except PreconditionError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (ConvergenceError, NumericalError) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except ConsistencyError as exc:
        sys.stderr.write(f"ALARM: {exc}\n")
        return EXIT_ALARM
    out.write(args.format, stdout)
    return out.code


if __name__ == "__main__":
    sys.exit(main())
