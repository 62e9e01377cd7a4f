import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from affstar.poisson import affine_2d, generic_poly, merge_contexts, nambu_3d
from affstar.series import bundled_star

EXTENDED = os.environ.get("AFFSTAR_EXTENDED") == "1"

extended_only = pytest.mark.skipif(
    not EXTENDED, reason="extended run; set AFFSTAR_EXTENDED=1"
)


@pytest.fixture(scope="session")
def star_aff():
    return bundled_star("aff")


@pytest.fixture(scope="session")
def star_red():
    return bundled_star("aff_red")


@pytest.fixture(scope="session")
def P2():
    return affine_2d()


@pytest.fixture(scope="session")
def nambu02():
    rho = generic_poly(0, "r")
    a = generic_poly(2, "a")
    rho, a = merge_contexts(rho, a, coords=("x", "y", "z"))
    return nambu_3d(rho, a)


@pytest.fixture(scope="session")
def nambu11():
    rho = generic_poly(1, "r")
    a = generic_poly(1, "a")
    rho, a = merge_contexts(rho, a, coords=("x", "y", "z"))
    return nambu_3d(rho, a)


@pytest.fixture(scope="session")
def trace_lines():
    """Per-order factorization trace lines of the reduced product, h^2..h^7."""
    text = (Path(__file__).parent / "data" / "assoc_red_traces.txt").read_text()
    blocks: dict[int, dict[str, str]] = {}
    current = None
    pending = None
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("h^"):
            current = int(line[2:-1])
            blocks[current] = {}
        elif line.startswith("("):
            head = line.split(":")[0]
            blocks[current][head] = line
            pending = head
        elif line in ("True", "False") and pending:
            blocks[current][pending] += f" | {line}"
            pending = None
    return blocks
