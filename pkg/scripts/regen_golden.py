"""Regenerate the committed CLI golden files in tests/golden/.

Run after an intentional change to a report schema, then review the diff.
"""
import io
from pathlib import Path

from revchain.cli import main

ROOT = Path(__file__).resolve().parent.parent
CHAINS = ROOT / "data" / "chains"
GOLDEN = ROOT / "tests" / "golden"

FIXTURES = ("flip", "lazy2", "mh3")


def golden_commands():
    for name in FIXTURES:
        chain = str(CHAINS / f"{name}.chain")
        yield f"analyze_{name}", ["analyze", chain]
        yield f"variance_{name}", ["variance", chain, "--function", "h"]
        yield f"conductance_{name}", ["conductance", chain, "--exact"]
        yield f"cheeger_{name}", ["cheeger", chain]
        yield f"compare_{name}", ["compare", chain, str(CHAINS / f"{name}_half.chain"), "--function", "h"]


def run(argv):
    buf = io.StringIO()
    code = main(argv + ["--format", "json"], stdout=buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    GOLDEN.mkdir(exist_ok=True)
    for stem, argv in golden_commands():
        code, out = run(argv)
        if code != 0:
            raise SystemExit(f"{stem}: exit {code}")
        (GOLDEN / f"{stem}.json").write_text(out)
        print("wrote", stem)
