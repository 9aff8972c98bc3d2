"""Write California Housing as a CSV the CLI and acceptance suite can read.

Needs scikit-learn and network access; neither is a dependency of the package.

    python scripts/fetch_california.py tests/data/california_housing.csv
"""
import sys
from pathlib import Path

from sklearn.datasets import fetch_california_housing


def main(out):
    frame = fetch_california_housing(as_frame=True).frame
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(out, index=False)
    print(f"wrote {out} ({len(frame)} rows, target column MedHouseVal)")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "tests/data/california_housing.csv")
