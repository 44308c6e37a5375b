import pytest

from dynalg import DynSystem, FiniteGroup


@pytest.fixture
def z2():
    return DynSystem.translation(FiniteGroup.cyclic(2))


@pytest.fixture
def z3():
    return DynSystem.translation(FiniteGroup.cyclic(3))


@pytest.fixture
def z4():
    return DynSystem.translation(FiniteGroup.cyclic(4))


@pytest.fixture
def klein():
    return DynSystem.translation(FiniteGroup.klein())


@pytest.fixture
def double_swap():
    """Z/2 acting freely on {0,1,2,3}: swap 0<->1 and 2<->3."""
    grp = FiniteGroup.cyclic(2)
    half = DynSystem.translation(grp)
    return DynSystem.disjoint_union(half, DynSystem.translation(grp))


@pytest.fixture
def trivial_two():
    """The trivial group on two points (free, not minimal)."""
    grp = FiniteGroup.trivial()
    one = DynSystem.translation(grp)
    return DynSystem.disjoint_union(one, DynSystem.translation(grp))


@pytest.fixture
def fixed_point_system():
    """Z/2 swapping 0<->1 and fixing 2 (not free)."""
    grp = FiniteGroup.cyclic(2)
    return DynSystem(grp, ("0", "1", "2"), ((0, 1, 2), (1, 0, 2)))
