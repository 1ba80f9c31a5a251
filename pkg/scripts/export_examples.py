"""Export full theories for a few small instances into out/<instance>/."""
import sys
from pathlib import Path

from parasuper.cli import JobConfig, run

INSTANCES = [
    ("A", 2, None),
    ("A", 3, (2, 1)),
    ("B", 2, None),
    ("C", 2, None),
    ("D", 2, None),
]


def main(root="out"):
    status = 0
    for series, n, part in INSTANCES:
        tag = f"{series}{n}" + ("" if part is None else "_" + "-".join(map(str, part)))
        cfg = JobConfig(series, n, 3, part, task="export-all", out=str(Path(root) / tag), timestamp=False)
        code = run(cfg)
        print(f"{tag}: exit {code}")
        status = max(status, code)
    return status


if __name__ == "__main__":
    sys.exit(main(*sys.argv[1:]))
