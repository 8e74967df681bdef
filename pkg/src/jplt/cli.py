"""Command line front end.

All user-facing files are JSON; matrices are arrays of arrays of ints in
[0, q), and every index (demand rows w, extension placements, reported
subsets) is 1-based in files and output, 0-based inside the library.

Exit codes: 0 success (and verification PASS), 1 invalid input,
2 verification FAIL, 3 I/O or transport trouble.
"""

from __future__ import annotations

import argparse
import json
import sys
from random import Random

from . import net, verify
from .codes import ExtensionChoice, GrsCode, grs_generator
from .gf import PrimeField
from .matrix import Matrix, matrix_from_lists, random_matrix
from .protocols import (
    Answer,
    Dataset,
    Demand,
    RecoveryPlan,
    jplt1_grs_query,
    jplt1_query,
    jplt2_query,
    recover,
    server_answer,
)

__all__ = ["main", "console_main"]


class _Exit(Exception):
    """Direct exit with a specific code and message."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract reserves
    # 2 for verification failures, so remap to 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read_json(path: str):
    with open(path, "rb") as fp:
        raw = fp.read()
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}")


def _write_canonical(path: str, obj) -> None:
    with open(path, "wb") as fp:
        fp.write(net.canonical_json_bytes(obj))
        fp.write(b"\n")


def _expect_keys(obj, required: set[str], optional: set[str], what: str) -> None:
    if not isinstance(obj, dict):
        raise ValueError(f"{what} must be a JSON object")
    missing = required - set(obj)
    unknown = set(obj) - required - optional
    if missing or unknown:
        raise ValueError(
            f"{what}: missing keys {sorted(missing)}, unknown keys {sorted(unknown)}"
        )
    if obj.get("version") != 1:
        raise ValueError(f"{what}: unsupported version {obj.get('version')!r}")


def _one_based(raw, what: str) -> tuple[int, ...]:
    if not isinstance(raw, list) or any(
        not isinstance(i, int) or isinstance(i, bool) or i < 1 for i in raw
    ):
        raise ValueError(f"{what} must be a list of 1-based integer indices")
    return tuple(i - 1 for i in raw)


def _load_dataset(path: str) -> Dataset:
    obj = _read_json(path)
    _expect_keys(obj, {"version", "q", "k", "n", "x"}, set(), "dataset file")
    field = PrimeField(obj["q"])
    x = matrix_from_lists(field, obj["x"], cols=obj["n"])
    if x.rows != obj["k"]:
        raise ValueError(f"dataset file: x has {x.rows} rows, k says {obj['k']}")
    return Dataset(x=x)


def _load_demand(path: str) -> tuple[Demand, GrsCode | None]:
    obj = _read_json(path)
    _expect_keys(obj, {"version", "model", "q", "w", "v"}, {"grs"}, "demand file")
    field = PrimeField(obj["q"])
    w = _one_based(obj["w"], "demand file: w")
    v = matrix_from_lists(field, obj["v"])
    demand = Demand(w=w, v=v, model=obj["model"])
    code = None
    if "grs" in obj:
        grs = obj["grs"]
        if not isinstance(grs, dict) or set(grs) != {"multipliers", "points"}:
            raise ValueError("demand file: grs needs exactly multipliers and points")
        code = GrsCode(
            field, tuple(grs["multipliers"]), tuple(grs["points"]), dim=v.rows
        )
        if grs_generator(code) != v:
            raise ValueError("demand file: grs parameters do not generate v")
    return demand, code


def _load_query_obj(path: str) -> dict:
    with open(path, "rb") as fp:
        raw = fp.read()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}")
    net.validate_wire(obj)
    if obj["type"] != "query":
        raise ValueError(f"{path}: expected a query message, got {obj['type']!r}")
    return obj


def _load_answer(path: str, field: PrimeField) -> Answer:
    with open(path, "rb") as fp:
        raw = fp.read()
    try:
        obj = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"{path}: not valid JSON: {exc}")
    net.validate_wire(obj)
    if obj["type"] != "answer":
        raise ValueError(f"{path}: expected an answer message, got {obj['type']!r}")
    return Answer(y=matrix_from_lists(field, obj["y"]))


def _build_query(demand: Demand, code: GrsCode | None, k: int, rng: Random,
                 extension_path: str | None):
    """Shared by the query and demo commands so seeds line up."""
    ext = _read_json(extension_path) if extension_path else None
    if demand.model == "I":
        if code is not None:
            choice = None
            if ext is not None:
                _expect_keys(
                    ext, {"version", "model", "multipliers", "points"},
                    {"placement"}, "extension file",
                )
                if ext["model"] != "I":
                    raise ValueError('extension file: model must be "I" for this demand')
                placement = (
                    _one_based(ext["placement"], "extension file: placement")
                    if "placement" in ext
                    else None
                )
                if placement is None:
                    choice = ExtensionChoice.canonical(
                        demand.w, k, tuple(ext["multipliers"]), tuple(ext["points"])
                    )
                else:
                    choice = ExtensionChoice(
                        tuple(ext["multipliers"]), tuple(ext["points"]), placement
                    )
            return jplt1_grs_query(demand.w, code, k, rng=rng, choice=choice)
        if ext is not None:
            raise ValueError(
                "extension injection for model I needs grs parameters in the demand file"
            )
        return jplt1_query(demand, k, rng)
    # model II
    m = r = None
    if ext is not None:
        _expect_keys(ext, {"version", "model"}, {"m", "r"}, "extension file")
        if ext["model"] != "II":
            raise ValueError('extension file: model must be "II" for this demand')
        if "m" in ext:
            m = matrix_from_lists(demand.field, ext["m"])
        if "r" in ext:
            r = matrix_from_lists(demand.field, ext["r"])
    return jplt2_query(demand, k, rng, mds_matrix=m, scramble=r)


def cmd_dataset_gen(args) -> int:
    field = PrimeField(args.q)
    if args.k < 1 or args.n < 1:
        raise ValueError("k and n must be positive")
    rng = Random(args.seed)
    x = random_matrix(args.k, args.n, field, rng)
    _write_canonical(
        args.out,
        {"version": 1, "q": args.q, "k": args.k, "n": args.n, "x": x.to_lists()},
    )
    print(f"wrote {args.k}x{args.n} dataset over GF({args.q}) -> {args.out}")
    return 0


def cmd_query(args) -> int:
    demand, code = _load_demand(args.demand)
    rng = Random(args.seed)
    query, plan = _build_query(demand, code, args.k, rng, args.extension)
    with open(args.out_query, "wb") as fp:
        fp.write(net.canonical_json_bytes(net.wire_query(query)))
        fp.write(b"\n")
    _write_canonical(args.out_plan, plan.to_json_obj())
    print(
        f"query: {query.downloaded_rows} of {args.k} rows over GF({demand.field.q})"
        f" -> {args.out_query}"
    )
    print(f"plan: {plan.variant} -> {args.out_plan}")
    return 0


def cmd_answer(args) -> int:
    dataset = _load_dataset(args.dataset)
    obj = _load_query_obj(args.query)
    reply = net.answer_for_wire(obj, dataset)
    with open(args.out, "wb") as fp:
        fp.write(net.canonical_json_bytes(reply))
        fp.write(b"\n")
    print(f"answer: {len(reply['y'])} rows -> {args.out}")
    return 0


def cmd_recover(args) -> int:
    plan = RecoveryPlan.from_json_obj(_read_json(args.plan))
    answer = _load_answer(args.answer, plan.field)
    z = recover(answer, plan)
    _write_canonical(args.out, {"version": 1, "q": plan.field.q, "z": z.to_lists()})
    print(f"recovered {z.rows} rows -> {args.out}")
    return 0


def cmd_demo(args) -> int:
    dataset = _load_dataset(args.dataset)
    demand, code = _load_demand(args.demand)
    if demand.field != dataset.field:
        raise ValueError("demand and dataset use different fields")
    rng = Random(args.seed)
    query, plan = _build_query(demand, code, dataset.k, rng, args.extension)
    answer = server_answer(query, dataset)
    z = recover(answer, plan)
    if args.out_z:
        _write_canonical(args.out_z, {"version": 1, "q": plan.field.q, "z": z.to_lists()})
    expected = demand.v @ dataset.x.select_rows(demand.w)
    recoverable = verify.check_recoverability(query.g, demand)
    exact = z == expected
    summary = verify.rate_summary(query)
    print(f"downloaded rows: {summary.downloaded_rows} of {summary.k}")
    print(f"rate: {summary.rate} ({float(summary.rate):.6f})")
    print(f"benchmark: {summary.benchmark} ({float(summary.benchmark):.6f})")
    print(f"recoverability: {'PASS' if recoverable else 'FAIL'}")
    print(f"exact recovery: {'PASS' if exact else 'FAIL'}")
    return 0 if (recoverable and exact) else 2


def cmd_serve(args) -> int:
    dataset = _load_dataset(args.dataset)
    host, port = net._parse_endpoint(args.listen)
    server = net.AnswerServer(dataset, host, port)
    bound_host, bound_port = server.address
    print(f"listening on {bound_host}:{bound_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()
    return 0


def cmd_fetch(args) -> int:
    obj = _load_query_obj(args.query)
    try:
        reply = net.request_wire(args.endpoint, obj, timeout=args.timeout)
    except (net.RemoteError, net.FrameError) as exc:
        raise _Exit(3, f"transport: {exc}")
    with open(args.out, "wb") as fp:
        fp.write(net.canonical_json_bytes(reply))
        fp.write(b"\n")
    print(f"answer: {len(reply['y'])} rows -> {args.out}")
    return 0


def cmd_verify(args) -> int:
    obj = _load_query_obj(args.query)
    field = PrimeField(obj["q"])
    g = matrix_from_lists(field, obj["g"], cols=obj["k"])
    model = args.model or obj["model"]
    rng = Random(args.seed) if args.sample is not None else None
    report = verify.check_joint_privacy(
        g, args.d, args.l, model, cap=args.cap, sample=args.sample, rng=rng
    )
    print(json.dumps(report.to_json_obj(), indent=2, sort_keys=True))
    scope = "exhaustive" if report.exhaustive else "sampled"
    if report.passed:
        print(f"joint privacy: PASS ({report.subsets_checked} subsets, {scope})")
        return 0
    print(
        f"joint privacy: FAIL ({len(report.failures)} of "
        f"{report.subsets_checked} subsets, {scope})"
    )
    return 2


def cmd_rates(args) -> int:
    d_to = args.d_to if args.d_to is not None else args.k
    d_values = range(args.d_from, d_to + 1, args.d_step)
    if not len(d_values):
        raise ValueError("empty d grid")
    rows = verify.rate_table(args.k, args.ld, d_values)
    with open(args.out, "w", newline="") as fp:
        verify.write_rate_csv(rows, fp)
    print(f"wrote {len(rows)} rows -> {args.out}")
    if args.plot:
        from .figures import render_rate_curves

        render_rate_curves(rows, args.plot)
        print(f"wrote figure -> {args.plot}")
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="jplt", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(metavar="command")

    p = sub.add_parser("dataset-gen", help="generate a random dataset file")
    p.add_argument("--q", type=int, required=True, help="prime field modulus")
    p.add_argument("--k", type=int, required=True, help="number of rows")
    p.add_argument("--n", type=int, required=True, help="symbols per row")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_dataset_gen)

    p = sub.add_parser("query", help="build a query and its private recovery plan")
    p.add_argument("--demand", required=True, help="demand JSON file")
    p.add_argument("--k", type=int, required=True, help="dataset height")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extension", help="inject protocol randomness from a JSON file")
    p.add_argument("--out-query", required=True)
    p.add_argument("--out-plan", required=True)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("answer", help="answer a query file against a dataset")
    p.add_argument("--dataset", required=True)
    p.add_argument("--query", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_answer)

    p = sub.add_parser("recover", help="decode an answer with a recovery plan")
    p.add_argument("--answer", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("demo", help="run query, answer, recover in one process")
    p.add_argument("--demand", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extension")
    p.add_argument("--out-z", help="also write the recovered rows")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("serve", help="serve answers over TCP until interrupted")
    p.add_argument("--dataset", required=True)
    p.add_argument("--listen", default="127.0.0.1:7710", help="host:port")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fetch", help="send a query file to a server")
    p.add_argument("--endpoint", required=True, help="host:port")
    p.add_argument("--query", required=True)
    p.add_argument("--timeout", type=float, default=net.DEFAULT_TIMEOUT)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fetch)

    p = sub.add_parser("verify", help="joint-privacy sweep over a query file")
    p.add_argument("--query", required=True)
    p.add_argument("--d", type=int, required=True, help="demand support size")
    p.add_argument("--l", type=int, required=True, help="demand rows")
    p.add_argument("--model", choices=["I", "II"], help="defaults to the query's tag")
    p.add_argument("--cap", type=int, default=verify.DEFAULT_SUBSET_CAP)
    scope = p.add_mutually_exclusive_group()
    scope.add_argument(
        "--exhaustive", action="store_true", help="sweep every subset (the default)"
    )
    scope.add_argument("--sample", type=int, help="check this many random subsets instead")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rates", help="rate comparison table (CSV, optional figure)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ld", required=True, help="l/d ratio, e.g. 0.6")
    p.add_argument("--d-from", type=int, default=10)
    p.add_argument("--d-to", type=int, default=None)
    p.add_argument("--d-step", type=int, default=10)
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--plot", help="also render the curves to this image path")
    p.set_defaults(func=cmd_rates)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help(sys.stderr)
        return 1
    try:
        return args.func(args)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except net.RemoteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())
