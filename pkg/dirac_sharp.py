"""
Entry point. No prompts: flags in, report out, exit code carries the verdict.
python dirac_sharp.py verify --suite all --n 3 --format json --out report.json
"""
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.cli import main


if __name__ == "__main__":
    sys.exit(main())
