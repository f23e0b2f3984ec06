"""Run the documented scenario and write its JSON and CSV reports under results/."""

import sys
from pathlib import Path

from cliffwave.cli import main

HERE = Path(__file__).resolve().parent

if __name__ == "__main__":
    sys.exit(main(["run", str(HERE / "scenarios" / "default.json")] + sys.argv[1:]))
