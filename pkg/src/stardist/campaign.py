"""Batch runs over graph streams and periodic descriptions.

A campaign reads a flat ``key = value`` config, expands its inputs (graph6
files, IGD files, bundled fixtures, or the internal enumerator for small
orders) and yields one :class:`ReportRecord` per input, in input order.
"""

from __future__ import annotations

import json
import time
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Iterable, Iterator, Optional

from .automorphism import automorphism_group
from .graph import Graph, is_connected, parse_graph6, write_graph6
from .oracle import Budget, BudgetExceeded, count_nonisomorphic_distinguishing, distinguishing_index, first_distinguishing
from .rooted import PreconditionError, theorem3_colourings
from .starfree import find_induced_star

TASKS = ("starfree", "dindex", "rooted", "infinite", "theorem1-replay", "theorem3-replay")
VERDICTS = ("PASS", "FAIL", "SKIP", "ERROR")
THEOREM_TASKS = {"rooted", "infinite", "theorem1-replay", "theorem3-replay"}


class ConfigError(ValueError):
    pass


@dataclass
class CampaignConfig:
    task: str = "theorem1-replay"
    n: int = 3
    inputs: list = field(default_factory=list)  # graph6 / IGD paths, or fixture:<name>
    orders: list = field(default_factory=list)  # enumerate connected graphs of these orders
    palette: Optional[int] = None  # theorem1-replay palette, default n - 1
    max_k: Optional[int] = None
    node_budget: int = 10**8
    time_budget: float = 600.0
    depths: list = field(default_factory=lambda: [4, 6, 8])
    margin: int = 2
    out: Optional[str] = None
    workers: int = 1

    def validate(self) -> "CampaignConfig":
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; expected one of {', '.join(TASKS)}")
        if self.task in THEOREM_TASKS and self.n < 3:
            raise ConfigError("theorem tasks need n >= 3")
        if self.node_budget <= 0 or self.time_budget <= 0:
            raise ConfigError("budgets must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if any(d <= self.margin for d in self.depths) or self.margin < 1:
            raise ConfigError("need every depth > margin >= 1")
        if not self.inputs and not self.orders:
            raise ConfigError("no inputs and no orders to enumerate")
        return self

    def budget(self) -> Budget:
        return Budget(self.node_budget, self.time_budget)


_LISTS = {"inputs": str, "orders": int, "depths": int}


def _coerce(name: str, value):
    if name not in {f.name for f in fields(CampaignConfig)}:
        raise ConfigError(f"unknown config key {name!r}")
    if value is None:
        return None
    if name in _LISTS:
        if isinstance(value, str):
            value = [v for v in value.replace(",", " ").split() if v]
        return [_LISTS[name](v) for v in value]
    try:
        if name in ("n", "node_budget", "workers", "margin", "palette", "max_k"):
            return int(value)
        if name == "time_budget":
            return float(value)
    except ValueError:
        raise ConfigError(f"{name}: bad value {value!r}") from None
    return str(value)


def parse_config(text: str, overrides: Optional[dict] = None, base: Optional[Path] = None) -> CampaignConfig:
    """Flat ``key = value`` lines; ``overrides`` (from the command line) win."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key.replace("-", "_")] = _coerce(key.replace("-", "_"), value)
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = _coerce(key, value)
    cfg = CampaignConfig(**values)
    if base is not None:
        cfg.inputs = [p if p.startswith("fixture:") or Path(p).is_absolute() else str(base / p)
                      for p in cfg.inputs]
    return cfg.validate()


def load_config(path: str, overrides: Optional[dict] = None) -> CampaignConfig:
    p = Path(path)
    return parse_config(p.read_text(), overrides, p.parent)


@dataclass
class ReportRecord:
    input: str
    task: str
    verdict: str
    metrics: dict = field(default_factory=dict)
    witness: Optional[dict] = None
    seconds: float = 0.0

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"bad verdict {self.verdict}")
        if self.verdict == "FAIL" and not self.witness:
            raise ValueError("FAIL records need a witness")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


# -- inputs ----------------------------------------------------------------


def iter_inputs(cfg: CampaignConfig) -> Iterator[tuple[str, object]]:
    """(input id, payload) pairs; payload is graph6 text or IGD text."""
    for path in cfg.inputs:
        if cfg.task == "infinite":
            if path.startswith("fixture:"):
                from .infinite import fixture_text

                yield path, fixture_text(path.split(":", 1)[1])
            else:
                yield path, Path(path).read_text()
            continue
        for i, line in enumerate(Path(path).read_text().splitlines(), 1):
            if line.strip():
                yield f"{path}:{i}", line.strip()
    if cfg.orders:
        from .enumerate import connected_graphs

        for order in cfg.orders:
            for i, g in enumerate(connected_graphs(order)):
                yield f"order{order}#{i}", write_graph6(g)


# -- tasks -----------------------------------------------------------------


def _roots(g: Graph) -> list[int]:
    return sorted(min(o) for o in automorphism_group(g).orbits())


def _starfree(cfg: CampaignConfig, g: Graph) -> tuple[str, dict, Optional[dict]]:
    w = find_induced_star(g, cfg.n)
    if w is None:
        return "PASS", {"free": True}, None
    return "FAIL", {"free": False}, {"star": str(w)}


def _dindex(cfg: CampaignConfig, g: Graph):
    if not is_connected(g) or g.size == 0:
        return "SKIP", {"reason": "needs a connected graph with an edge"}, None
    res = distinguishing_index(g, cfg.max_k, cfg.budget())
    m = {"dindex": str(res)}
    if res.witness is not None:
        m["colouring"] = res.witness.to_text()
    return "PASS", m, None


def _precheck(cfg: CampaignConfig, g: Graph) -> Optional[str]:
    if not is_connected(g):
        return "disconnected"
    if find_induced_star(g, cfg.n) is not None:
        return f"contains an induced K_1,{cfg.n}"
    return None


def _theorem1(cfg: CampaignConfig, g: Graph):
    why = _precheck(cfg, g)
    if why:
        return "SKIP", {"reason": why}, None
    if g.n < 6:
        return "SKIP", {"reason": "order below 6"}, None
    k = cfg.palette or cfg.n - 1
    c = first_distinguishing(g, k, budget=cfg.budget())
    if c is None:
        return "FAIL", {"palette": k}, {"graph6": write_graph6(g), "palette": k, "search": "exhausted"}
    return "PASS", {"palette": k, "colouring": c.to_text()}, None


def _rooted(cfg: CampaignConfig, g: Graph, replay: bool):
    why = _precheck(cfg, g)
    if why:
        return "SKIP", {"reason": why}, None
    n = cfg.n
    per_root = {}
    for r in _roots(g):
        budget = cfg.budget()
        try:
            out = theorem3_colourings(g, r, n, budget)
        except AssertionError as exc:
            return "FAIL", {"root": r}, {"root": r, "error": str(exc)}
        entry = {"exception": out.exception} if out.is_exception else {
            "colourings": [c.to_text() for c in out.colourings]}
        if replay:
            found = count_nonisomorphic_distinguishing(g, [r], n - 1, limit=n - 1, budget=budget)
            entry["oracle_classes"] = found
            if out.is_exception and found >= n - 1:
                return "FAIL", {"root": r}, {"root": r, "exception": out.exception, "oracle_classes": found}
            if not out.is_exception and found < n - 1:
                return "FAIL", {"root": r}, {"root": r, "colourings": entry["colourings"], "oracle_classes": found}
        per_root[str(r)] = entry
    return "PASS", {"roots": per_root}, None


def _infinite(cfg: CampaignConfig, text: str):
    from .infinite import check_laws, construct, parse_igd, verify_fixed_core

    d = parse_igd(text)
    con, pc = construct(d, cfg.n)
    laws = check_laws(con)
    reports = [verify_fixed_core(d, pc, r, cfg.margin) for r in cfg.depths]
    metrics = {"laws": laws, "fixed_core": [r.to_json() for r in reports], "colouring": pc.to_json()}
    if laws:
        return "FAIL", metrics, {"violations": laws}
    bad = [r for r in reports if not r.passed]
    if bad:
        return "FAIL", metrics, {"depth": bad[0].depth, "automorphism": bad[0].witness}
    return "PASS", metrics, None


def run_one(cfg: CampaignConfig, item: tuple[str, object]) -> ReportRecord:
    ident, payload = item
    start = time.monotonic()
    try:
        if cfg.task == "infinite":
            verdict, metrics, witness = _infinite(cfg, payload)
        else:
            g = parse_graph6(payload)
            metrics0 = {"graph6": payload}
            if cfg.task == "starfree":
                verdict, metrics, witness = _starfree(cfg, g)
            elif cfg.task == "dindex":
                verdict, metrics, witness = _dindex(cfg, g)
            elif cfg.task == "theorem1-replay":
                verdict, metrics, witness = _theorem1(cfg, g)
            else:
                verdict, metrics, witness = _rooted(cfg, g, cfg.task == "theorem3-replay")
            metrics = {**metrics0, **metrics}
    except BudgetExceeded as exc:
        verdict, metrics, witness = "ERROR", {"error": f"budget: {exc}"}, None
    except (PreconditionError, ValueError, RuntimeError) as exc:
        verdict, metrics, witness = "ERROR", {"error": f"{type(exc).__name__}: {exc}"}, None
    except Exception as exc:  # crash isolation: one bad input never stops the campaign
        verdict, metrics = "ERROR", {"error": f"{type(exc).__name__}: {exc}",
                                     "trace": traceback.format_exc(limit=3)}
        witness = None
    return ReportRecord(ident, cfg.task, verdict, metrics, witness, round(time.monotonic() - start, 4))


def _run_star(args) -> ReportRecord:
    return run_one(*args)


def run_campaign(cfg: CampaignConfig) -> Iterator[ReportRecord]:
    cfg.validate()
    items = list(iter_inputs(cfg))
    if cfg.workers == 1:
        for item in items:
            yield run_one(cfg, item)
        return
    with ProcessPoolExecutor(cfg.workers) as pool:
        # map keeps input order regardless of completion order
        yield from pool.map(_run_star, [(cfg, item) for item in items], chunksize=4)


def summarize(records: Iterable[ReportRecord]) -> dict:
    counts = {v: 0 for v in VERDICTS}
    for r in records:
        counts[r.verdict] += 1
    counts["total"] = sum(counts[v] for v in VERDICTS)
    return counts


def emit_report(records: Iterable[ReportRecord], path: Optional[str] = None, stream=None) -> dict:
    """Write JSON lines plus a closing summary line; returns the counts."""
    kept = list(records)
    counts = summarize(kept)
    lines = [r.to_json() for r in kept] + [json.dumps({"summary": counts}, sort_keys=True)]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    if stream is not None:
        stream.write(text)
    return counts
