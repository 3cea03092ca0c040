from rackbench.utils.algebra import RightQuasigroup
from rackbench.utils.perm import Perm


def from_cycles(n, *cycles_per_vertex):
    """One-based cycle notation per vertex, as written in the worked examples."""
    return RightQuasigroup.from_perms(
        [Perm.from_cycles(n, cycles, one_based=True) for cycles in cycles_per_vertex]
    )


def random_perm(rng, n):
    images = list(range(n))
    rng.shuffle(images)
    return Perm(images=tuple(images))


def random_right_quasigroup(rng, n):
    return RightQuasigroup.from_perms([random_perm(rng, n) for _ in range(n)])
