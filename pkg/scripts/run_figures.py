"""Run every scenario in scripts/scenarios through the CLI and write one table per scenario.

    python scripts/run_figures.py [output_dir] [--format csv|json]

The subcommand for a scenario follows its name: *_cooling* -> cool,
*_friction* -> friction, anything else -> force.
"""
import argparse
import sys
import time
from pathlib import Path

from vacprop import cli

HERE = Path(__file__).resolve().parent


def command_for(path: Path) -> str:
    if "cooling" in path.stem:
        return "cool"
    if "friction" in path.stem:
        return "friction"
    return "force"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("output_dir", nargs="?", default="figures_out")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    args = ap.parse_args(argv)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for scen in sorted((HERE / "scenarios").glob("*.json")):
        cmd = command_for(scen)
        target = out / f"{scen.stem}.{args.format}"
        start = time.perf_counter()
        code = cli.main([cmd, str(scen), "--output", str(target), "--format", args.format])
        print(f"{scen.stem:22s} {cmd:8s} exit {code}  {time.perf_counter() - start:6.2f} s  -> {target}")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
