"""Seeded experiment harness: scaling studies and construction demos.

Every record carries ``schema``, a mandatory ``kind`` and the seed chain that
reproduces it. ``kind`` is one of:

* ``exact``: the true minimum over all abelian groups;
* ``construction``: the size realised by an explicit labeling;
* ``heuristic_upper_bound``: an annealing result, an upper bound only;
* ``verified_bound``: universal-construction counts checked per instance.
"""

from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__
from .abelian import AbelianGroup
from .graphs import disjoint_triangles, random_regular
from .heuristic import AnnealConfig, heuristic_min_sumset
from .sumset import DEFAULT_EDGE_CAP, exact_min_sumset, sumset_size, triangle_construction
from .universal import build_descriptor, embed, generating_set_size

SCHEMA = 1
KINDS = ("exact", "construction", "heuristic_upper_bound", "verified_bound")
HEURISTIC_DISCLAIMER = "upper bound on S_H(G) for the listed group; not S(G)"
EXPERIMENTS = ("triangle_scaling", "regular_scaling", "universal_demo")


def derive_seed(master: int, *index: int) -> int:
    """Child seed from ``(master, index...)``; stable across runs and platforms."""
    h = hashlib.blake2b(json.dumps([int(master), *map(int, index)]).encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little") >> 1


@dataclass
class ResultRecord:
    experiment: str
    kind: str
    params: dict[str, Any]
    size: int | None
    seeds: dict[str, Any]
    witness: dict[str, Any] = field(default_factory=dict)
    wall_time: float | None = None
    schema: int = SCHEMA

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}")

    def key(self) -> tuple:
        return (self.experiment, tuple(sorted(self.params.items())), self.kind)

    def to_dict(self) -> dict[str, Any]:
        out = {
            "schema": self.schema,
            "experiment": self.experiment,
            "kind": self.kind,
            "params": self.params,
            "size": self.size,
            "seeds": self.seeds,
            "witness": self.witness,
        }
        if self.wall_time is not None:
            out["wall_time"] = self.wall_time
        return out


class _Clock:
    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.t = time.perf_counter()

    def lap(self) -> float | None:
        if not self.enabled:
            return None
        now = time.perf_counter()
        dt, self.t = now - self.t, now
        return round(dt, 6)


# -- triangles ----------------------------------------------------------------


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def run_triangle_scaling(
    m_grid: Sequence[int], seed: int = 0, exact_cap: int = DEFAULT_EDGE_CAP, timing: bool = False
) -> list[ResultRecord]:
    """Constructed sum-set size for ``m`` disjoint triangles, plus exact values when small.

    The construction is deterministic; ``seed`` only enters the record.
    """
    out = []
    for i, m in enumerate(m_grid):
        clock = _Clock(timing)
        G = disjoint_triangles(m)
        lab = triangle_construction(m)
        seeds = {"master": seed, "index": i}
        out.append(
            ResultRecord(
                "triangle_scaling", "construction", {"m": m}, sumset_size(G, lab), seeds,
                {"group_moduli": [0], "bound": math.ceil((6 * m) ** (1 / 3)) + 3},
                clock.lap(),
            )
        )
        if G.m <= exact_cap:
            r = exact_min_sumset(G, exact_cap)
            out.append(
                ResultRecord(
                    "triangle_scaling", "exact", {"m": m}, r.size, seeds,
                    {"group_moduli": list(r.group.moduli), "virtual_edges": [list(e) for e in r.virtual_edges]},
                    clock.lap(),
                )
            )
    return out


# -- random regular graphs ------------------------------------------------------


def default_group_family(n: int) -> list[AbelianGroup]:
    return [
        AbelianGroup((n,)),
        AbelianGroup((2 * n,)),
        AbelianGroup((2,) * max(1, math.ceil(math.log2(n)))),
    ]


def resolve_groups(n: int, family) -> list[AbelianGroup]:
    """``None`` means the default family; otherwise a list of moduli lists or
    the names ``cyclic_n``, ``cyclic_2n``, ``elementary2``."""
    if family is None:
        return default_group_family(n)
    named = {
        "cyclic_n": AbelianGroup((n,)),
        "cyclic_2n": AbelianGroup((2 * n,)),
        "elementary2": AbelianGroup((2,) * max(1, math.ceil(math.log2(n)))),
    }
    return [named[g] if isinstance(g, str) else AbelianGroup(tuple(g)) for g in family]


def run_regular_scaling(
    n_grid: Sequence[int],
    d: int,
    trials: int = 1,
    group_family=None,
    budget: int = 20000,
    seed: int = 0,
    exact_n: int = 6,
    anneal: AnnealConfig | None = None,
    timing: bool = False,
) -> list[ResultRecord]:
    """Heuristic sum-set sizes of random d-regular graphs over a group family.

    Graphs with at most ``exact_n`` vertices also get an exact companion
    record.
    """
    if not n_grid or trials < 1:
        raise ValueError("empty grid or no trials")
    for n in n_grid:
        if (n * d) % 2 or d >= n:
            raise ValueError(f"no {d}-regular graph on {n} vertices")
    out = []
    for n in n_grid:
        for t in range(trials):
            clock = _Clock(timing)
            gseed = derive_seed(seed, n, t)
            G = random_regular(n, d, gseed)
            best = None
            for gi, H in enumerate(resolve_groups(n, group_family)):
                hseed = derive_seed(gseed, gi)
                r = heuristic_min_sumset(G, H, budget, hseed, anneal)
                best = r.size if best is None else min(best, r.size)
                out.append(
                    ResultRecord(
                        "regular_scaling", "heuristic_upper_bound",
                        {"n": n, "d": d, "trial": t, "group_moduli": list(H.moduli), "budget": budget},
                        r.size,
                        {"master": seed, "graph": gseed, "heuristic": hseed},
                        {"disclaimer": HEURISTIC_DISCLAIMER, "edges": G.m, **r.metadata()},
                        clock.lap(),
                    )
                )
            if n <= exact_n and G.m <= DEFAULT_EDGE_CAP:
                ex = exact_min_sumset(G)
                out.append(
                    ResultRecord(
                        "regular_scaling", "exact", {"n": n, "d": d, "trial": t},
                        ex.size, {"master": seed, "graph": gseed},
                        {"group_moduli": list(ex.group.moduli), "heuristic_best": best},
                        clock.lap(),
                    )
                )
    return out


# -- universal construction -------------------------------------------------------


def run_universal_demo(
    n: int,
    d: int,
    seed: int = 0,
    trials: int = 20,
    c: float = 1.0,
    b: float = 8.0,
    c_embed: float = 1.0,
    retries: int = 100,
    p_min: int = 3,
    timing: bool = False,
) -> ResultRecord:
    """Embed ``trials`` random d-regular graphs into one descriptor and check
    that every induced labeling has at most ``exact`` distinct sums."""
    clock = _Clock(timing)
    dseed = derive_seed(seed, 0)
    desc = build_descriptor(n, d, c, b, dseed, p_min=p_min)
    gs = generating_set_size(desc)
    runs = []
    for t in range(trials):
        gseed = derive_seed(seed, 1, t)
        eseed = derive_seed(seed, 2, t)
        G = random_regular(n, d, gseed)
        emb = embed(G, desc, c_embed, retries, eseed)
        size = sumset_size(G, emb.labeling(desc))
        runs.append(
            {
                "trial": t,
                "graph_seed": gseed,
                "embed_seed": eseed,
                "attempts": emb.attempts,
                "worst_preimage": emb.worst_preimage,
                "sumset_size": size,
                "within_exact": size <= gs.exact,
            }
        )
    ok = gs.exact <= gs.bound and all(r["within_exact"] for r in runs)
    return ResultRecord(
        "universal_demo", "verified_bound",
        {"n": n, "d": d, "c": c, "b": b, "c_embed": c_embed, "trials": trials, "p_min": p_min},
        max(r["sumset_size"] for r in runs) if runs else None,
        {"master": seed, "descriptor": dseed},
        {
            "descriptor": desc.to_dict(),
            "d_prime": desc.params.d_prime,
            "generating_exact": gs.exact,
            "generating_bound": gs.bound,
            "all_verified": ok,
            "max_attempts": max((r["attempts"] for r in runs), default=0),
            "runs": runs,
        },
        clock.lap(),
    )


# -- configs and output -------------------------------------------------------------


@dataclass
class ExperimentConfig:
    experiment: str
    grid: dict[str, Any]
    seed: int
    trials: int = 1
    budget: int = 20000
    timing: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if not self.grid:
            raise ValueError("grid is empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.seed is None:
            raise ValueError("a seed is required")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if "seed" not in data:
            raise ValueError("a seed is required")
        return cls(
            data["experiment"], dict(data.get("grid", {})), int(data["seed"]),
            int(data.get("trials", 1)), int(data.get("budget", 20000)), bool(data.get("timing", False)),
        )

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "grid": self.grid,
            "seed": self.seed,
            "trials": self.trials,
            "budget": self.budget,
            "timing": self.timing,
        }


def run_experiment(cfg: ExperimentConfig) -> list[ResultRecord]:
    g = cfg.grid
    if cfg.experiment == "triangle_scaling":
        recs = run_triangle_scaling(g["m"], cfg.seed, g.get("exact_cap", DEFAULT_EDGE_CAP), cfg.timing)
    elif cfg.experiment == "regular_scaling":
        recs = run_regular_scaling(
            g["n"], g.get("d", 3), cfg.trials, g.get("groups"), cfg.budget, cfg.seed,
            g.get("exact_n", 6), timing=cfg.timing,
        )
    else:
        ns = g["n"] if isinstance(g["n"], list) else [g["n"]]
        recs = [
            run_universal_demo(
                n, g.get("d", 3), derive_seed(cfg.seed, i), cfg.trials, g.get("c", 1.0),
                g.get("b", 8.0), g.get("c_embed", 1.0), g.get("retries", 100), g.get("p_min", 3),
                cfg.timing,
            )
            for i, n in enumerate(ns)
        ]
    return sorted(recs, key=ResultRecord.key)


CSV_COLUMNS = ["schema", "experiment", "kind", "params", "size", "seeds", "witness"]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_outputs(records: Sequence[ResultRecord], cfg: ExperimentConfig, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rows = [r.to_dict() for r in records]
    (out / "results.json").write_text(dumps({"schema": SCHEMA, "records": rows}))
    with open(out / "results.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        cols = CSV_COLUMNS + (["wall_time"] if cfg.timing else [])
        w.writerow(cols)
        for row in rows:
            w.writerow(
                [json.dumps(row[c], sort_keys=True) if isinstance(row.get(c), dict) else row.get(c) for c in cols]
            )
    manifest = {
        "schema": SCHEMA,
        "tool": "graphsums",
        "version": __version__,
        "config": cfg.to_dict(),
        "seeds": sorted({json.dumps(r.seeds, sort_keys=True) for r in records}),
        "records": len(records),
    }
    (out / "manifest.json").write_text(dumps(manifest))
    return out
