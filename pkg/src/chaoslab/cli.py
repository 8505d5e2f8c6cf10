"""Command-line front end: supnorm, verify, scaling, norm, walsh.

Exit codes: 0 success, 1 check failure, 2 usage or parse error, 3 resource
cap exceeded.  Every artifact embeds the effective configuration snapshot
(CSV as a leading ``# config`` comment line, JSON under a ``config`` key) and
artifacts are cached under the output directory keyed by the snapshot hash,
so re-running an identical command re-emits byte-identical files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import extremal, matio, spaces
from .chaos import eval_decoupled, eval_undecoupled
from .config import RunConfig, load_config
from .errors import EnumerationCapError, MatrixParseError
from .rearrange import rearrangement
from .suites import SUITE_NAMES, SuiteResult, run_suite

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaoslab",
        description="Exact norms and extremal sign searches for degree-2 chaos polynomials.",
    )
    parser.add_argument("--config", metavar="PATH", help="config file overlaying the packaged defaults")
    parser.add_argument("--seed", type=int, metavar="U64", help="override the run seed")
    parser.add_argument("--out", metavar="DIR", help="output directory for artifacts")
    parser.add_argument("--format", choices=["csv", "json", "both"], help="artifact format")
    parser.add_argument("--no-cache", action="store_true", help="bypass the result cache")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("supnorm", help="exact sup norm of a chaos polynomial")
    p.add_argument("matrix", help="matrix file ('n m' header, whitespace rows; .csv/.json also accepted)")
    p.add_argument("--mode", choices=["decoupled", "undecoupled"], default="decoupled")

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=list(SUITE_NAMES) + ["all"])

    p = sub.add_parser("scaling", help="sup-norm statistics against n^(3/2)")
    p.add_argument("--n", default="1,2,4,8", metavar="LIST", help="comma-separated sizes")
    p.add_argument("--samples", type=int, default=None, help="Monte-Carlo samples per size")

    p = sub.add_parser("norm", help="evaluate a symmetric-space norm of a chaos polynomial")
    p.add_argument("matrix")
    p.add_argument("--space", required=True, help="lp:Q | orlicz-exp | marc:EPS | lorentz:P")
    p.add_argument("--mode", choices=["decoupled", "undecoupled"], default="decoupled")
    p.add_argument("--export-rearrangement", metavar="PATH",
                   help="also write the decreasing rearrangement as two-column CSV")

    p = sub.add_parser("walsh", help="emit a Walsh sign arrangement")
    p.add_argument("--k", type=int, required=True, help="matrix size is 2^k")
    p.add_argument("--defect", action="store_true", help="also print the Sidon defect ratio")
    return parser


def _effective_config(args) -> RunConfig:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.out_dir = args.out
    if args.format is not None:
        cfg.out_format = args.format
    if args.no_cache:
        cfg.cache = False
    return cfg


def _formats(cfg: RunConfig) -> list[str]:
    return ["csv", "json"] if cfg.out_format == "both" else [cfg.out_format]


class _Emitter:
    """Renders, caches and writes artifacts keyed by command + config snapshot."""

    def __init__(self, cfg: RunConfig, command: str, params: dict):
        self.cfg = cfg
        self.out_dir = Path(cfg.out_dir)
        key_obj = {"command": command, "params": params, "config": cfg.snapshot()}
        self.key = hashlib.sha256(
            json.dumps(key_obj, sort_keys=True).encode()
        ).hexdigest()[:32]

    def emit(self, stem: str, render: dict) -> dict[str, str]:
        """render maps extension -> zero-arg callable producing the text."""
        self.out_dir.mkdir(parents=True, exist_ok=True)
        cache_dir = self.out_dir / ".cache"
        texts: dict[str, str] = {}
        for ext, make in render.items():
            cache_file = cache_dir / f"{self.key}-{stem}.{ext}"
            if self.cfg.cache and cache_file.exists():
                text = cache_file.read_text()
            else:
                text = make()
                if self.cfg.cache:
                    cache_dir.mkdir(parents=True, exist_ok=True)
                    cache_file.write_text(text)
            (self.out_dir / f"{stem}.{ext}").write_text(text)
            texts[ext] = text
        return texts


def _config_comment(cfg: RunConfig) -> str:
    return "# config " + json.dumps(cfg.snapshot(), sort_keys=True)


def _json_artifact(cfg: RunConfig, payload: dict) -> str:
    doc = dict(payload)
    doc["config"] = cfg.snapshot()
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "NA"
    if isinstance(v, float) and v.is_integer():
        return str(int(v))
    return repr(v) if isinstance(v, float) else str(v)


def _cmd_supnorm(args, cfg: RunConfig) -> int:
    a = matio.load_matrix(args.matrix)
    if args.mode == "decoupled":
        value = extremal.sup_norm_decoupled(a)
    else:
        value = extremal.sup_norm_undecoupled(a)
    n, m = a.shape
    print(f"supnorm mode={args.mode} n={n} m={m} value={_fmt(value)}")
    emitter = _Emitter(cfg, "supnorm", {"matrix": str(args.matrix), "mode": args.mode})
    payload = {"command": "supnorm", "mode": args.mode, "n": n, "m": m, "value": value}
    emitter.emit("supnorm", {"json": lambda: _json_artifact(cfg, payload)})
    return EXIT_OK


def _suite_csv(cfg: RunConfig, results: list[SuiteResult]) -> str:
    lines = [_config_comment(cfg), "suite,check,status,value,bound,tol"]
    for res in results:
        for c in res.checks:
            bound = c.bound.replace('"', "'")
            lines.append(
                f'{res.suite},{c.id},{c.status},{_fmt(c.value)},"{bound}",{_fmt(c.tol)}'
            )
    return "\n".join(lines) + "\n"


def _suite_json(cfg: RunConfig, results: list[SuiteResult]) -> str:
    payload = {
        "command": "verify",
        "suites": [
            {
                "suite": res.suite,
                "passed": res.passed,
                "wall_time": res.wall_time,
                "checks": [
                    {
                        "id": c.id,
                        "status": c.status,
                        "value": c.value,
                        "bound": c.bound,
                        "tol": c.tol,
                    }
                    for c in res.checks
                ],
            }
            for res in results
        ],
    }
    return _json_artifact(cfg, payload)


def _cmd_verify(args, cfg: RunConfig) -> int:
    results = run_suite(args.suite, cfg)
    buffered = []
    for res in results:
        for c in res.checks:
            mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[c.status]
            buffered.append(
                f"[{mark}] {res.suite}.{c.id} value={_fmt(c.value)} bound: {c.bound}"
            )
        verdict = "PASS" if res.passed else "FAIL"
        buffered.append(f"suite {res.suite}: {verdict} ({res.wall_time:.2f}s)")
    print("\n".join(buffered))
    emitter = _Emitter(cfg, "verify", {"suite": args.suite})
    render = {}
    if "csv" in _formats(cfg):
        render["csv"] = lambda: _suite_csv(cfg, results)
    if "json" in _formats(cfg):
        render["json"] = lambda: _suite_json(cfg, results)
    emitter.emit(f"verify-{args.suite}", render)
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _scaling_rows(cfg: RunConfig, ns: list[int], samples: int) -> list[dict]:
    rows = []
    for n in ns:
        if 2 ** (n * n) <= samples and n <= extremal.EXACT_AVERAGE_CAP:
            rep = extremal.exact_average(n)
            rows.append(_report_row(rep))
        elif n <= extremal.MONTE_CARLO_CAP:
            rep = extremal.monte_carlo_average(n, samples, cfg.seed)
            rows.append(_report_row(rep))
        else:
            rows.append(
                {"n": n, "mode": "monte_carlo", "value": None, "ratio": None,
                 "samples": 0, "seed": cfg.seed, "elapsed_ms": 0.0, "status": "skip"}
            )
        if n <= extremal.EXHAUSTIVE_CAP:
            rows.append(_report_row(extremal.exhaustive_inf(n)))
        else:
            rows.append(
                {"n": n, "mode": "exhaustive", "value": None, "ratio": None,
                 "samples": 0, "seed": 0, "elapsed_ms": 0.0, "status": "skip"}
            )
        k = n.bit_length() - 1
        if n == 2**k:
            if k <= extremal.SIDON_K_CAP:
                t0 = time.perf_counter()
                value = extremal.sup_norm_decoupled(extremal.walsh_sign_arrangement(k))
                rows.append(
                    {"n": n, "mode": "walsh", "value": value, "ratio": value / n**1.5,
                     "samples": 2 ** (n - 1), "seed": 0,
                     "elapsed_ms": (time.perf_counter() - t0) * 1000.0, "status": "ok"}
                )
            else:
                rows.append(
                    {"n": n, "mode": "walsh", "value": None, "ratio": None,
                     "samples": 0, "seed": 0, "elapsed_ms": 0.0, "status": "skip"}
                )
    return rows


def _report_row(rep: extremal.SearchReport) -> dict:
    return {
        "n": rep.n,
        "mode": rep.mode,
        "value": rep.value,
        "ratio": rep.value / rep.n**1.5,
        "samples": rep.samples,
        "seed": rep.seed,
        "elapsed_ms": rep.elapsed * 1000.0,
        "status": "ok",
    }


def _scaling_csv(cfg: RunConfig, rows: list[dict]) -> str:
    lines = [_config_comment(cfg), "n,mode,value,value_over_n15,samples,seed,elapsed_ms"]
    for r in rows:
        lines.append(
            ",".join(
                [
                    str(r["n"]),
                    r["mode"] if r["status"] == "ok" else f"{r['mode']}[skip]",
                    _fmt(r["value"]),
                    _fmt(r["ratio"]),
                    str(r["samples"]),
                    str(r["seed"]),
                    _fmt(r["elapsed_ms"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _cmd_scaling(args, cfg: RunConfig) -> int:
    try:
        ns = [int(tok) for tok in args.n.replace(",", " ").split()]
    except ValueError:
        print(f"error: --n must be a comma-separated integer list, got {args.n!r}",
              file=sys.stderr)
        return EXIT_USAGE
    if not ns or any(n < 1 for n in ns):
        print("error: --n must list positive integers", file=sys.stderr)
        return EXIT_USAGE
    samples = args.samples if args.samples is not None else cfg.samples
    emitter = _Emitter(cfg, "scaling", {"n": ns, "samples": samples, "seed": cfg.seed})

    rows_box: list = []

    def compute() -> list[dict]:
        if not rows_box:
            rows_box.append(_scaling_rows(cfg, ns, samples))
        return rows_box[0]

    render = {}
    if "csv" in _formats(cfg):
        render["csv"] = lambda: _scaling_csv(cfg, compute())
    if "json" in _formats(cfg):
        render["json"] = lambda: _json_artifact(
            cfg, {"command": "scaling", "rows": compute()}
        )
    texts = emitter.emit("scaling", render)
    print(texts.get("csv") or texts.get("json"), end="")
    return EXIT_OK


def _cmd_norm(args, cfg: RunConfig) -> int:
    spec = spaces.parse_space(args.space)
    a = matio.load_matrix(args.matrix)
    if args.mode == "decoupled":
        x = eval_decoupled(a, max_bits=cfg.max_bits_2d)
    else:
        x = eval_undecoupled(a, max_bits=cfg.max_bits_1d)
    value = spaces.evaluate_norm(spec, x, cfg.orlicz_rel_tol)
    print(f"norm space={args.space} mode={args.mode} value={_fmt(value)}")
    if args.export_rearrangement:
        Path(args.export_rearrangement).write_text(
            matio.rearrangement_to_csv(rearrangement(x))
        )
    emitter = _Emitter(
        cfg, "norm", {"matrix": str(args.matrix), "space": args.space, "mode": args.mode}
    )
    payload = {
        "command": "norm",
        "space": args.space,
        "mode": args.mode,
        "n": a.shape[0],
        "m": a.shape[1],
        "value": value,
    }
    emitter.emit("norm", {"json": lambda: _json_artifact(cfg, payload)})
    return EXIT_OK


def _cmd_walsh(args, cfg: RunConfig) -> int:
    theta = extremal.walsh_sign_arrangement(args.k)
    sys.stdout.write(matio.format_matrix_text(theta))
    payload = {"command": "walsh", "k": args.k, "n": int(theta.shape[0])}
    if args.defect:
        defect = extremal.sidon_defect(args.k)
        payload["defect"] = defect
        print(f"defect={_fmt(defect)}")
    emitter = _Emitter(cfg, "walsh", {"k": args.k, "defect": args.defect})
    render = {}
    if "csv" in _formats(cfg):
        render["csv"] = lambda: matio.format_matrix_csv(theta)
    if "json" in _formats(cfg):
        render["json"] = lambda: _json_artifact(
            cfg, {**payload, "matrix": [[int(v) for v in row] for row in theta]}
        )
    emitter.emit(f"walsh-k{args.k}", render)
    return EXIT_OK


_COMMANDS = {
    "supnorm": _cmd_supnorm,
    "verify": _cmd_verify,
    "scaling": _cmd_scaling,
    "norm": _cmd_norm,
    "walsh": _cmd_walsh,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _effective_config(args)
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args, cfg)
    except MatrixParseError as exc:
        print(f"error: {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
