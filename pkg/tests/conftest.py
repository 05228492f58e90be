import pytest

from arraycal import Scene


@pytest.fixture
def hand_scene_zero():
    """Two mics, two sources, c=1, synchronized clocks."""
    return Scene(
        mics=[[0, 0, 0], [1, 0, 0]],
        srcs=[[0, 0, 0], [0, 1, 0]],
        delta=[0.0, 0.0],
        eta=[0.0, 0.0],
        c=1.0,
    )


@pytest.fixture
def hand_scene_offsets():
    """Same geometry with nonzero clock offsets."""
    return Scene(
        mics=[[0, 0, 0], [1, 0, 0]],
        srcs=[[0, 0, 0], [0, 1, 0]],
        delta=[0.3, -0.2],
        eta=[0.5, 0.1],
        c=1.0,
    )
