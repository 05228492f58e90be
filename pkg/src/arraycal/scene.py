"""Random generation of asynchronous microphone/source scenes.

A scene bundles ground-truth geometry with the clock state that makes the
setup asynchronous: each microphone starts recording at an unknown time and
each source emits at an unknown time.
"""

import json
from dataclasses import dataclass

import numpy as np

from .rng import make_rng
from .validation import check_positions, check_vector

DEFAULT_SPEED_OF_SOUND = 340.0  # m/s


@dataclass(frozen=True)
class Scene:
    """Ground-truth geometry and clock state for one array configuration.

    mics and srcs are (M, 3) and (N, 3) positions in meters. delta holds the
    recording start time of each microphone and eta the emission time of each
    source, both in seconds. c is the speed of sound in m/s. All arrays are
    copied on construction and frozen afterwards.
    """

    mics: np.ndarray
    srcs: np.ndarray
    delta: np.ndarray
    eta: np.ndarray
    c: float = DEFAULT_SPEED_OF_SOUND

    def __post_init__(self):
        mics = check_positions(self.mics, "mics")
        srcs = check_positions(self.srcs, "srcs")
        delta = check_vector(self.delta, len(mics), "delta")
        eta = check_vector(self.eta, len(srcs), "eta")
        c = float(self.c)
        if not np.isfinite(c) or c <= 0.0:
            raise ValueError(f"c must be positive and finite, got {c}")
        for arr in (mics, srcs, delta, eta):
            arr.setflags(write=False)
        object.__setattr__(self, "mics", mics)
        object.__setattr__(self, "srcs", srcs)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "eta", eta)
        object.__setattr__(self, "c", c)

    @property
    def num_mics(self) -> int:
        return self.mics.shape[0]

    @property
    def num_srcs(self) -> int:
        return self.srcs.shape[0]

    def to_dict(self) -> dict:
        return {
            "mics": self.mics.tolist(),
            "srcs": self.srcs.tolist(),
            "delta": self.delta.tolist(),
            "eta": self.eta.tolist(),
            "c": self.c,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Scene":
        return cls(data["mics"], data["srcs"], data["delta"], data["eta"], data["c"])


@dataclass(frozen=True)
class SceneConfig:
    """Knobs for random scene generation.

    room gives the box side lengths in meters (the box corner sits at the
    origin), offset_range the half-width of the uniform clock offset interval
    in seconds, seed a non-negative 64-bit integer.
    """

    num_mics: int = 20
    num_srcs: int = 20
    room: tuple = (10.0, 10.0, 3.0)
    offset_range: float = 1.0
    speed: float = DEFAULT_SPEED_OF_SOUND
    seed: int = 0

    def __post_init__(self):
        if int(self.num_mics) < 1 or int(self.num_srcs) < 1:
            raise ValueError("num_mics and num_srcs must be at least 1")
        room = tuple(float(s) for s in self.room)
        if len(room) != 3 or any(not np.isfinite(s) or s <= 0.0 for s in room):
            raise ValueError(f"room must be three positive side lengths, got {self.room}")
        if not np.isfinite(self.offset_range) or self.offset_range < 0.0:
            raise ValueError(f"offset_range must be non-negative, got {self.offset_range}")
        if not np.isfinite(self.speed) or self.speed <= 0.0:
            raise ValueError(f"speed must be positive, got {self.speed}")
        if int(self.seed) < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        object.__setattr__(self, "num_mics", int(self.num_mics))
        object.__setattr__(self, "num_srcs", int(self.num_srcs))
        object.__setattr__(self, "room", room)
        object.__setattr__(self, "offset_range", float(self.offset_range))
        object.__setattr__(self, "speed", float(self.speed))
        object.__setattr__(self, "seed", int(self.seed))


def generate_scene(config: SceneConfig) -> Scene:
    """Draw a random scene, bit-reproducible for a given config.

    Draw order is fixed: mic positions, source positions, mic start times,
    source emission times, all from one PCG64 stream seeded with config.seed.
    Positions are i.i.d. uniform in the room box, offsets i.i.d. uniform in
    [-offset_range, offset_range].
    """
    rng = make_rng(config.seed)
    room = np.asarray(config.room, dtype=float)
    mics = rng.uniform(0.0, room, size=(config.num_mics, 3))
    srcs = rng.uniform(0.0, room, size=(config.num_srcs, 3))
    delta = rng.uniform(-config.offset_range, config.offset_range, size=config.num_mics)
    eta = rng.uniform(-config.offset_range, config.offset_range, size=config.num_srcs)
    return Scene(mics=mics, srcs=srcs, delta=delta, eta=eta, c=config.speed)


def normalize_scene(scene: Scene) -> Scene:
    """Translate the scene so the first source sits exactly at the origin.

    Pairwise distances are unchanged, so every timing-derived quantity is too.
    Offsets and the speed of sound are carried over untouched.
    """
    shift = scene.srcs[0]
    return Scene(scene.mics - shift, scene.srcs - shift, scene.delta, scene.eta, scene.c)


def pairwise_distances(points_a, points_b) -> np.ndarray:
    """Euclidean distances between two point sets, shape (len(a), len(b))."""
    a = np.asarray(points_a, dtype=float)
    b = np.asarray(points_b, dtype=float)
    diff = a[:, None, :] - b[None, :, :]
    return np.sqrt((diff * diff).sum(axis=2))


def scene_diameter(scene: Scene) -> float:
    """Largest pairwise distance over all microphone and source positions."""
    pts = np.vstack([scene.mics, scene.srcs])
    return float(pairwise_distances(pts, pts).max())


def save_scene(scene: Scene, path) -> None:
    with open(path, "w") as fh:
        json.dump(scene.to_dict(), fh, indent=2)
        fh.write("\n")


def load_scene(path) -> Scene:
    with open(path) as fh:
        return Scene.from_dict(json.load(fh))
