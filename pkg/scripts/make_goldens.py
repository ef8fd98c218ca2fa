"""Regenerate the golden report files used by the CLI parity tests."""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from golden_cases import SPACES, golden_path, golden_text  # noqa: E402


def main():
    for name in SPACES:
        path = golden_path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(golden_text(name))
        print(path)


if __name__ == "__main__":
    main()
