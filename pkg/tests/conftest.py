import random
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from transversals import Block, PartitionedInstance  # noqa: E402


def make_instance(r, block_members, edges, roles=None, meta=None):
    blocks = [Block(id=i, members=tuple(ms)) for i, ms in enumerate(block_members)]
    return PartitionedInstance(r, blocks, edges, roles=roles, meta=meta)


def random_capped_degree_instance(t, n, rng, cap):
    """t-thick instance on n blocks with every vertex degree at most cap."""
    blocks = [list(range(b * t, (b + 1) * t)) for b in range(n)]
    deg = [0] * (n * t)
    edges = set()
    for _ in range(rng.randrange(n * t, 3 * n * t)):
        u = rng.randrange(n * t)
        v = rng.randrange(n * t)
        if u == v or u // t == v // t:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or deg[u] >= cap or deg[v] >= cap:
            continue
        edges.add(e)
        deg[u] += 1
        deg[v] += 1
    return make_instance(2, blocks, sorted(edges))


def random_block_capped_instance(t, n, rng, block_cap):
    """t-thick instance on n blocks with every block degree at most block_cap."""
    blocks = [list(range(b * t, (b + 1) * t)) for b in range(n)]
    bdeg = [0] * n
    edges = set()
    for _ in range(rng.randrange(0, 8 * n)):
        u = rng.randrange(n * t)
        v = rng.randrange(n * t)
        if u == v or u // t == v // t:
            continue
        e = (min(u, v), max(u, v))
        if e in edges or bdeg[u // t] >= block_cap or bdeg[v // t] >= block_cap:
            continue
        edges.add(e)
        bdeg[u // t] += 1
        bdeg[v // t] += 1
    return make_instance(2, blocks, sorted(edges))


@pytest.fixture
def rng():
    return random.Random(20260808)
