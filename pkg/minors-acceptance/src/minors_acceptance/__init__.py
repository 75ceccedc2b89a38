import sys

import pytest


def main() -> None:
    sys.exit(pytest.main(["minors-acceptance/tests/acceptance_suite.py", "-m", "acceptance", *sys.argv[1:]]))


if __name__ == "__main__":
    main()
