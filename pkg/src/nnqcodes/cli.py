"""Command line entry point: ``nnqcodes {eval,search,sweep,ame,analytic} --config FILE``.

Exit status is 0 on success, 2 for an unusable configuration and 3 when a
numerical step fails. Files are written to ``--out`` atomically.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import analytic
from .ame import AmeProblem, ame_objective, dm_upper_bound
from .ansatz import AnsatzSpec, assemble_state, param_bounds
from .channels import KrausChannel, channel_from_dict
from .cohinfo import (
    DISPLAY_CONVENTION,
    ci_objective,
    coherent_information,
    evaluate_table_code,
    table_code_state,
)
from .optimize import Objective, RunRecord, chain, stage_from_dict

log = logging.getLogger("nnqcodes")

EXIT_CONFIG = 2
EXIT_NUMERIC = 3


class ConfigError(ValueError):
    """The configuration cannot be turned into a run."""


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def parameter_grid(lo: float, hi: float, step: float) -> np.ndarray:
    """Inclusive grid ``lo, lo+step, ..., <= hi``; a single point when lo == hi."""
    if hi < lo:
        raise ConfigError(f"empty parameter range [{lo}, {hi}]")
    if lo == hi:
        return np.array([float(lo)])
    if step <= 0:
        raise ConfigError("range step must be positive")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return np.round(lo + step * np.arange(count), 12)


def _grid_from(cfg: dict) -> np.ndarray:
    if "values" in cfg:
        vals = np.asarray(cfg["values"], dtype=float)
        if vals.size == 0:
            raise ConfigError("empty parameter list")
        return vals
    try:
        lo, hi, *rest = cfg["range"]
    except (KeyError, TypeError, ValueError):
        raise ConfigError("need 'range': [lo, hi, step] or 'values'") from None
    return parameter_grid(float(lo), float(hi), float(rest[0]) if rest else 0.0)


# ---------------------------------------------------------------- code files


def entries_from_config(code: Any) -> list[tuple[str, complex]]:
    """Accept ``{label: [re, im]}`` or ``[[label, re, im], ...]``."""
    if isinstance(code, dict):
        items = [(k, v) for k, v in code.items()]
        return [(k, complex(v[0], v[1]) if isinstance(v, (list, tuple)) else complex(v)) for k, v in items]
    if isinstance(code, list):
        return [(str(s), complex(re, im)) for s, re, im in code]
    raise ConfigError("code must be a mapping or a list of [label, re, im]")


@dataclass
class LoadedCode:
    channel: KrausChannel
    k: int
    dim_R: int
    entries: list[tuple[str, complex]]

    def state(self):
        return table_code_state(self.entries, self.dim_R, self.channel.in_dim, self.k)


def load_code(cfg: dict, base: Path) -> LoadedCode:
    if "code_file" in cfg:
        path = base / cfg["code_file"]
        try:
            sub = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read code file {path}: {exc}") from None
        merged = {**sub, **{k: v for k, v in cfg.items() if k != "code_file"}}
        return load_code(merged, path.parent)
    try:
        channel = channel_from_dict(cfg["channel"])
        k = int(cfg["k"])
        entries = entries_from_config(cfg["code"])
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return LoadedCode(channel, k, int(cfg.get("dim_R", 2**k)), entries)


# --------------------------------------------------------------- emit_table


def basis_label(index: int, k: int, d_a: int, n_ref: int, d_r: int) -> str:
    """Display label ``A^k|R`` for an internal (R, A^k) index."""
    r_idx, a_idx = divmod(index, d_a**k)
    a = np.base_repr(a_idx, d_a).zfill(k) if k else ""
    r = np.base_repr(r_idx, d_r).zfill(n_ref) if n_ref else ""
    return f"{a}|{r}"


def code_table(amplitudes: np.ndarray, k: int, d_a: int, n_ref: int, d_r: int,
               ci_per_use: float | None, threshold: float = 1e-4) -> str:
    amps = np.asarray(amplitudes, dtype=complex)
    amps = amps / np.linalg.norm(amps)
    lines = [f"# convention: {DISPLAY_CONVENTION}"]
    if ci_per_use is not None:
        lines.append(f"# ci_per_use: {ci_per_use:.10g}")
    rows = [i for i in np.flatnonzero(np.abs(amps) > threshold)]
    if not rows:
        warnings.warn(f"no amplitude above threshold {threshold}", stacklevel=2)
    for i in rows:
        a = amps[i]
        lines.append(f"{basis_label(int(i), k, d_a, n_ref, d_r)}  {a.real: .8f}  {a.imag: .8f}")
    return "\n".join(lines) + "\n"


def parse_code_table(text: str) -> list[tuple[str, complex]]:
    """Read back the rows written by :func:`code_table`."""
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        label, re, im = line.split()
        out.append((label, complex(float(re), float(im))))
    return out


def emit_table(run: RunRecord, threshold: float = 1e-4) -> str:
    """Nonzero amplitudes of a search result, labelled ``A^k|R``.

    ``run.extras`` must carry the ``ansatz`` spec, the ``channel`` and ``k``,
    as written by the ``search`` task.
    """
    spec = AnsatzSpec.from_dict(run.extras["ansatz"])
    channel = channel_from_dict(run.extras["channel"])
    k = int(run.extras["k"])
    psi = assemble_state(spec, run.best_x)
    ci = coherent_information(psi, channel, k).ci_per_use
    n_ref = spec.n - k
    return code_table(psi.amplitudes, k, channel.in_dim, n_ref, spec.d, ci, threshold)


# -------------------------------------------------------------------- tasks


def _stage_list(cfg: dict, seed: int, restart: int) -> list:
    raw = cfg.get("optimizer")
    if isinstance(raw, dict):
        raw = [raw]
    if not raw:
        raise ConfigError("need an 'optimizer' stage list")
    stages = []
    for j, st in enumerate(raw):
        try:
            name, ocfg = stage_from_dict(st)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"optimizer stage {j}: {exc}") from None
        s = int(np.random.SeedSequence([seed, restart, j]).generate_state(1)[0])
        stages.append((name, replace(ocfg, seed=s)))
    return stages


def _search_common(cfg: dict, args) -> tuple[int, int]:
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        raise ConfigError("search tasks need a seed (--seed or 'seed' in config)")
    restarts = args.restarts if args.restarts is not None else cfg.get("restarts", 1)
    if int(restarts) < 1:
        raise ConfigError("restarts must be at least 1")
    return int(seed), int(restarts)


def _spec_from(cfg: dict) -> AnsatzSpec:
    try:
        return AnsatzSpec.from_dict(cfg["ansatz"])
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad ansatz: {exc}") from None


def task_eval(cfg: dict, args, base: Path) -> dict:
    code = load_code(cfg, base)
    ev = evaluate_table_code(code.entries, code.dim_R, code.channel.in_dim, code.k, code.channel)
    result = ev.to_dict()
    text = json.dumps(result, indent=2)
    print(text)
    if args.out:
        write_atomic(Path(args.out) / "eval.json", text + "\n")
    return result


def task_search(cfg: dict, args, base: Path) -> dict:
    seed, restarts = _search_common(cfg, args)
    spec = _spec_from(cfg)
    try:
        channel = channel_from_dict(cfg["channel"])
        k = int(cfg["k"])
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if spec.dim % channel.in_dim**k:
        raise ConfigError("ansatz state does not fit k channel inputs")
    bound = float(cfg.get("bound", 10.0))
    plans = [_stage_list(cfg, seed, r) for r in range(restarts)]
    obj = Objective(ci_objective(spec, channel, k), param_bounds(spec, bound), args.threads)
    out = Path(args.out) if args.out else None

    summary = []
    best = None
    for r, stages in enumerate(plans):
        rec = chain(obj, stages)
        rec.seed = seed
        rec.extras.update(
            {"ansatz": spec.to_dict(), "channel": channel.to_dict(), "k": k, "restart": r,
             "ci_per_use": -rec.best_value}
        )
        log.info("restart %d: ci_per_use %.6e", r, -rec.best_value)
        summary.append({"restart": r, "ci_per_use": -rec.best_value})
        if out:
            write_atomic(out / f"restart_{r:02d}.json", rec.to_json() + "\n")
            write_atomic(out / f"restart_{r:02d}_trace.csv", rec.trace_csv())
        if best is None or rec.best_value < best.best_value:
            best = rec
    result = {"seed": seed, "restarts": summary, "best_restart": best.extras["restart"],
              "best_ci_per_use": -best.best_value}
    if out:
        write_atomic(out / "summary.json", json.dumps(result, indent=2) + "\n")
        write_atomic(out / "best_code.txt", emit_table(best, float(cfg.get("threshold", 1e-4))))
    print(json.dumps(result, indent=2))
    return result


def _benchmarks(channel: KrausChannel, k: int) -> tuple[float, float]:
    """Per-use rates of the single-use code and of the best repetition-type code on k uses."""
    kind, p = channel.kind, channel.params
    if kind == "depolarizing":
        phi1 = analytic.depolarizing_single_letter_ci(p["p"])
        _, _, rate = analytic.best_product_repcode(min(k, 10), p["p"])
        return phi1, max(rate, phi1)
    if kind == "gadc":
        def ci_k(kk):
            return lambda l: analytic.gadc_repcode_ci(analytic.RepCodeSpec(kk, l), p["gamma"], p["N"])
    elif kind == "dephrasure":
        def ci_k(kk):
            return lambda l: analytic.dephrasure_repcode_ci(analytic.RepCodeSpec(kk, l), p["p"], p["q"])
    else:
        return float("nan"), float("nan")
    phi1 = analytic.best_weighted_repcode(ci_k(1), grid=401)[1]
    best = max(analytic.best_weighted_repcode(ci_k(kk), grid=401)[1] / kk for kk in range(1, k + 1))
    return phi1, best


def task_sweep(cfg: dict, args, base: Path) -> list:
    code = load_code(cfg, base)
    name = cfg.get("param")
    desc = dict(cfg["channel"])
    if name not in desc:
        raise ConfigError(f"sweep parameter {name!r} is not a channel parameter")
    grid = _grid_from(cfg)
    psi = code.state()
    rows = []
    for v in grid:
        try:
            ch = channel_from_dict({**desc, name: float(v)})
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        ci = coherent_information(psi, ch, code.k).ci_per_use
        phi1, best = _benchmarks(ch, code.k)
        rows.append([float(v), ci, phi1, best])
    text = _csv_text([name, "ci_code", "ci_phi1", "ci_best_rep"], rows)
    _emit(args, "sweep.csv", text)
    return rows


def task_analytic(cfg: dict, args, base: Path) -> list:
    kind = cfg.get("channel")
    if isinstance(kind, dict):
        fixed = {k: v for k, v in kind.items() if k != "kind"}
        kind = kind.get("kind")
    else:
        fixed = dict(cfg.get("fixed", {}))
    name = cfg.get("param")
    ks = cfg.get("k", [1])
    ks = [int(x) for x in (ks if isinstance(ks, list) else [ks])]
    grid = _grid_from(cfg)
    names = {"depolarizing": ["p"], "gadc": ["gamma", "N"], "dephrasure": ["p", "q"]}
    if kind not in names:
        raise ConfigError(f"unknown channel kind {kind!r}")
    if name not in names[kind] or set(fixed) | {name} != set(names[kind]):
        raise ConfigError(f"{kind} sweep needs parameters {names[kind]}, sweeping one of them")
    rows = []
    for v in grid:
        params = {**fixed, name: float(v)}
        for kk in ks:
            if kind == "depolarizing":
                lam, total = 0.5, analytic.depolarizing_repcode_ci(kk, params["p"])
            elif kind == "gadc":
                lam, total = analytic.best_weighted_repcode(
                    lambda l: analytic.gadc_repcode_ci(analytic.RepCodeSpec(kk, l), params["gamma"], params["N"]))
            else:
                lam, total = analytic.best_weighted_repcode(
                    lambda l: analytic.dephrasure_repcode_ci(analytic.RepCodeSpec(kk, l), params["p"], params["q"]))
            rows.append([kind] + [params[n] for n in names[kind]] + [kk, lam, total / kk])
    text = _csv_text(["channel", *names[kind], "k", "lambda_opt", "ci_per_use"], rows)
    _emit(args, "analytic.csv", text)
    return rows


def task_ame(cfg: dict, args, base: Path) -> dict:
    seed, restarts = _search_common(cfg, args)
    spec = _spec_from(cfg)
    try:
        prob = AmeProblem(int(cfg["n"]), int(cfg["d"]), cfg.get("m"))
    except KeyError as exc:
        raise ConfigError(f"missing field {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if spec.dim != prob.d**prob.n:
        raise ConfigError("ansatz dimension does not match d**n")
    plans = [_stage_list(cfg, seed, r) for r in range(restarts)]
    obj = Objective(ame_objective(spec, prob), param_bounds(spec, float(cfg.get("bound", 10.0))),
                    args.threads)
    out = Path(args.out) if args.out else None
    dm = prob.d**prob.m
    summary = []
    for r, stages in enumerate(plans):
        rec = chain(obj, stages)
        rec.seed = seed
        rec.extras.update({"ansatz": spec.to_dict(), "problem": [prob.n, prob.d, prob.m], "restart": r})
        rows = []
        for i, (st, v) in enumerate(zip(rec.stages, rec.trace)):
            q = min(max(1.0 - v, 0.0), 1.0)
            rows.append([st, i, float(v), dm_upper_bound(q, prob.d, prob.m)])
        if out:
            write_atomic(out / f"restart_{r:02d}.json", rec.to_json() + "\n")
            write_atomic(out / f"restart_{r:02d}_trace.csv",
                         _csv_text(["stage", "iteration", "one_minus_Qm", "dm_bound"], rows))
        summary.append({"restart": r, "one_minus_Qm": rec.best_value})
    result = {"seed": seed, "problem": [prob.n, prob.d, prob.m], "restarts": summary,
              "best_one_minus_Qm": min(s["one_minus_Qm"] for s in summary)}
    if out:
        write_atomic(out / "summary.json", json.dumps(result, indent=2) + "\n")
    print(json.dumps(result, indent=2))
    return result


def _emit(args, filename: str, text: str) -> None:
    if args.out:
        write_atomic(Path(args.out) / filename, text)
    else:
        sys.stdout.write(text)


TASKS = {
    "eval": task_eval,
    "search": task_search,
    "sweep": task_sweep,
    "ame": task_ame,
    "analytic": task_analytic,
}


def _threads(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("QCI_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"QCI_THREADS={env!r} is not an integer") from None
    return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nnqcodes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="task", required=True)
    for name, fn in TASKS.items():
        p = sub.add_parser(name, help=fn.__name__.replace("task_", "") + " task")
        p.add_argument("--config", required=True, help="JSON configuration file")
        p.add_argument("--seed", type=int, help="master seed (overrides config)")
        p.add_argument("--restarts", type=int, help="independent restarts (overrides config)")
        p.add_argument("--out", help="output directory")
        p.add_argument("--threads", type=int, help="evaluation threads (default: $QCI_THREADS or 1)")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    path = Path(args.config)
    try:
        cfg = json.loads(path.read_text())
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        args.threads = _threads(args.threads)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"error: bad config {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        TASKS[args.task](cfg, args, path.parent)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return 0


def main() -> None:
    sys.exit(run())
