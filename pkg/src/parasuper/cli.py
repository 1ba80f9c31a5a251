"""Batch driver.

    parasuper --series C --rank 2 --prime 3 --task verify --out out/

Exit status: 0 success, 2 invalid configuration, 3 a theorem check failed,
4 a size cap was exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from .contraction import build_context
from .orbits import ClassificationError, OrbitCapExceeded, superclasses_Ua
from .rook import label_json
from .roots import LieTypeSpec, PartitionSpec
from .scalars import PrimeModulus
from .superchar import assemble_theory
from .verify import check_axioms, check_structural_claims, describe

log = logging.getLogger("parasuper")

EXIT_OK, EXIT_CONFIG, EXIT_THEOREM, EXIT_CAP = 0, 2, 3, 4
TASKS = ("classify-ua", "theory-ua", "theory-ga", "verify", "export-all")
MAX_ELEMENTS = 2_000_000


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class JobConfig:
    series: str
    rank: int
    prime: int = 3
    partition: tuple | None = None
    task: str = "verify"
    out: str = "out"
    orbit_cap: int | None = None
    workers: int = 1
    timestamp: bool = True

    def validate(self) -> "JobConfig":
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; choose from {', '.join(TASKS)}")
        try:
            spec = LieTypeSpec(self.series, int(self.rank))
            PrimeModulus(int(self.prime))
            if self.partition is not None:
                PartitionSpec(spec, tuple(self.partition))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.workers < 1:
            raise ConfigError("--workers must be at least 1")
        if self.orbit_cap is not None and self.orbit_cap < 1:
            raise ConfigError("--orbit-cap must be positive")
        return self

    def context(self):
        ctx = build_context((self.series, int(self.rank)), self.partition, int(self.prime))
        n = ctx.group_order
        if n > MAX_ELEMENTS:
            raise OrbitCapExceeded(f"|G^a| = {n} exceeds the element cap {MAX_ELEMENTS}")
        return ctx


def parse_partition(text: str | None):
    if text is None or text.strip().lower() in ("", "borel"):
        return None
    try:
        return tuple(int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x)
    except ValueError:
        raise ConfigError(f"cannot parse partition {text!r}; use e.g. 2,1") from None


# ---------------------------------------------------------------------------
# serialization


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def _label(obj):
    if isinstance(obj, tuple):
        return [_label(x) for x in obj]
    if hasattr(obj, "to_json"):
        return json.loads(label_json(obj))
    return int(obj)


def _coeff_tuple(ch, j) -> list:
    return [str(c) for c in ch.value(j).coeffs]


def superclasses_json(classes) -> list:
    return [
        {"index": j, "label": _label(K.label), "size": int(K.size), "representative": int(K.representative)}
        for j, K in enumerate(classes)
    ]


def supercharacters_json(theory) -> dict:
    r = len(theory.classes)
    return {
        "group": theory.group,
        "field": f"Q(zeta_{theory.N})",
        "basis": "powers of zeta",
        "characters": [
            {
                "index": i,
                "label": _label(ch.label),
                "degree": str(ch.degree),
                "values": [_coeff_tuple(ch, j) for j in range(r)],
            }
            for i, ch in enumerate(theory.characters)
        ],
    }


def table_csv(theory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["character"] + [f"K{j} (size {K.size})" for j, K in enumerate(theory.classes)])
    for i, ch in enumerate(theory.characters):
        w.writerow([f"S{i}"] + ["(" + ",".join(_coeff_tuple(ch, j)) + ")" for j in range(len(theory.classes))])
    w.writerow([])
    w.writerow(["display only: real parts rounded to 6 places"])
    for i, ch in enumerate(theory.characters):
        w.writerow([f"S{i}"] + [f"{complex(ch.value(j)).real:.6f}" for j in range(len(theory.classes))])
    return buf.getvalue()


def _write(out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")


# ---------------------------------------------------------------------------
# driver


def _export_theory(theory, out: Path, workers: int) -> dict:
    _write(out, "superclasses.json", _dump(superclasses_json(theory.classes)))
    _write(out, "supercharacters.json", _dump(supercharacters_json(theory)))
    _write(out, "table.csv", table_csv(theory))
    rep = check_axioms(theory, workers=workers)
    return rep.to_json()


def run(cfg: JobConfig) -> int:
    cfg.validate()
    ctx = cfg.context()
    out = Path(cfg.out)
    report = {"config": {k: v for k, v in asdict(cfg).items() if k not in ("out", "timestamp", "workers")},
              "instance": describe(ctx), "summary": ctx.summary()}
    ok = True
    t0 = time.perf_counter()
    if cfg.task == "classify-ua":
        classes = superclasses_Ua(ctx, cfg.orbit_cap)
        _write(out, "superclasses.json", _dump(superclasses_json(classes)))
        report["superclasses"] = len(classes)
    elif cfg.task in ("theory-ua", "theory-ga"):
        theory = assemble_theory(ctx, "Ua" if cfg.task == "theory-ua" else "Ga", cfg.orbit_cap)
        report["axioms"] = _export_theory(theory, out, cfg.workers)
        ok = report["axioms"]["status"] == "pass"
    else:
        sections = {}
        for tgt in ("Ua", "Ga"):
            theory = assemble_theory(ctx, tgt, cfg.orbit_cap)
            if cfg.task == "export-all":
                sections[tgt] = _export_theory(theory, out / tgt.lower(), cfg.workers)
            else:
                sections[tgt] = check_axioms(theory, workers=cfg.workers).to_json()
        sections["claims"] = check_structural_claims(ctx, theory).to_json()
        report["checks"] = sections
        ok = all(s["status"] == "pass" for s in sections.values())
    if cfg.timestamp:
        report["generated"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
        report["seconds"] = round(time.perf_counter() - t0, 3)
    report["status"] = "pass" if ok else "fail"
    _write(out, "report.json", _dump(report))
    log.info("%s %s: %s", cfg.task, describe(ctx), report["status"])
    return EXIT_OK if ok else EXIT_THEOREM


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="parasuper", description="Supercharacter theories of parabolic contractions.")
    ap.add_argument("--series", required=True, choices=["A", "B", "C", "D"])
    ap.add_argument("--rank", required=True, type=int, help="n: GL(n), O(2n+1), Sp(2n), O(2n)")
    ap.add_argument("--prime", type=int, default=3, help="odd prime p")
    ap.add_argument("--partition", default=None, help="block sizes, e.g. 2,1 (default: Borel)")
    ap.add_argument("--task", default="verify", choices=TASKS)
    ap.add_argument("--out", default="out")
    ap.add_argument("--orbit-cap", type=int, default=None)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--no-timestamp", action="store_true")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = JobConfig(
            series=args.series, rank=args.rank, prime=args.prime,
            partition=parse_partition(args.partition), task=args.task, out=args.out,
            orbit_cap=args.orbit_cap, workers=args.workers, timestamp=not args.no_timestamp,
        )
        return run(cfg)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OrbitCapExceeded as exc:
        print(f"size cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ClassificationError as exc:
        print(f"theorem check failed: {exc}", file=sys.stderr)
        return EXIT_THEOREM


if __name__ == "__main__":
    sys.exit(main())
