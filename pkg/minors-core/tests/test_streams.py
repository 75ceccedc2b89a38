import numpy as np
from minors_core.streams import RandomStream


def test_same_key_same_draws() -> None:
    first = RandomStream(7).child(3, 0).generator().standard_normal(5)
    second = RandomStream(7).child(3).child(0).generator().standard_normal(5)
    np.testing.assert_array_equal(first, second)


def test_children_are_independent_streams() -> None:
    replica = RandomStream(7).child(3)
    empirical = replica.child(0).generator().standard_normal(5)
    theoretical = replica.child(1).generator().standard_normal(5)
    assert not np.array_equal(empirical, theoretical)
