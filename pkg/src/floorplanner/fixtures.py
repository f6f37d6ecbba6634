"""Named benchmark worlds used by the tests and the CLI demos.

Each entry is a plain world-grammar dict (see synth.generate_world) with a
default trajectory and observation settings baked in, so a fixture can be
rebuilt bit-exactly from its name alone.  Room bounds sit on the 0.1 m
lattice; interior walls are the standard 0.1 m slabs; doorway centers keep
apertures inside the shared wall overlap.
"""
from __future__ import annotations

import copy

from .ingest import Scene
from .synth import World, build_trajectory, generate_world, observe_from_spec

_SPECS: dict[str, dict] = {
    # 6 m x 6 m single room, no doorways: 4 planes, 60x60x30 grid.
    "one_room": {
        "name": "one_room",
        "spaces": [
            {"name": "room", "kind": "room", "bounds": [0.0, 6.0, 0.0, 6.0]},
        ],
        "trajectory": {
            "waypoints": [[3.03, 2.99], [3.03, 3.47], [2.51, 3.47], [3.03, 2.99]],
            "interval": 0.5,
        },
        "observation": {"seed": 1},
    },
    # two rooms split by one wall slab with a single 1 m doorway: 7 planes
    # (the south wall is shared), 1 doorway
    "two_rooms_shared_wall": {
        "name": "two_rooms_shared_wall",
        "spaces": [
            {"name": "room1", "kind": "room", "bounds": [0.0, 6.0, 0.0, 6.0]},
            {"name": "room2", "kind": "room", "bounds": [6.1, 12.0, 0.0, 5.0]},
        ],
        "doorways": [
            {"between": ["room1", "room2"], "center": 2.5, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [[2.97, 2.51], [9.03, 2.49]],
            "interval": 0.5,
        },
        "observation": {"seed": 1},
    },
    # three rooms hanging off a long corridor; the corridor overhangs room A
    # to the west and shares its east cap plane with room B's east wall, so
    # the plane partition comes out (4, 3, 3, 2)
    "three_rooms_corridor": {
        "name": "three_rooms_corridor",
        "spaces": [
            {"name": "room_a", "kind": "room", "bounds": [0.0, 14.0, 1.0, 6.0]},
            {"name": "room_b", "kind": "room", "bounds": [14.1, 28.0, 1.0, 6.0]},
            {"name": "room_c", "kind": "room", "bounds": [28.1, 38.0, 0.0, 6.0]},
            {"name": "corridor", "kind": "corridor", "bounds": [-2.0, 28.0, 6.1, 8.1]},
        ],
        "doorways": [
            {"between": ["room_a", "corridor"], "center": 5.0, "width": 1.0},
            {"between": ["room_b", "corridor"], "center": 21.0, "width": 1.0},
            {"between": ["room_b", "room_c"], "center": 3.5, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [
                [-1.03, 7.11], [26.97, 7.11], [5.03, 7.11], [5.03, 3.51],
                [5.03, 7.09], [20.97, 7.09], [20.97, 3.51], [26.03, 3.51],
                [29.53, 3.49], [33.03, 2.99],
            ],
            "interval": 1.0,
        },
        "observation": {"seed": 1},
    },
    # four identical-depth rooms north of one long corridor; room walls are
    # staggered off the lattice of each other so no x-plane repeats
    "four_rooms_corridor": {
        "name": "four_rooms_corridor",
        "spaces": [
            {"name": "corridor", "kind": "corridor", "bounds": [0.0, 30.0, 0.0, 2.0]},
            {"name": "room1", "kind": "room", "bounds": [0.0, 7.2, 2.1, 8.0]},
            {"name": "room2", "kind": "room", "bounds": [7.3, 14.5, 2.1, 8.0]},
            {"name": "room3", "kind": "room", "bounds": [14.6, 21.8, 2.1, 8.0]},
            {"name": "room4", "kind": "room", "bounds": [21.9, 30.0, 2.1, 8.0]},
        ],
        "doorways": [
            {"between": ["room1", "corridor"], "center": 3.6, "width": 1.0},
            {"between": ["room2", "corridor"], "center": 10.9, "width": 1.0},
            {"between": ["room3", "corridor"], "center": 18.2, "width": 1.0},
            {"between": ["room4", "corridor"], "center": 25.95, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [
                [0.97, 1.03], [29.03, 0.97], [25.93, 1.03], [25.93, 4.99],
                [25.93, 1.01], [18.17, 1.01], [18.17, 4.99], [18.17, 0.99],
                [10.87, 0.99], [10.87, 5.01], [10.87, 1.01], [3.57, 1.01],
                [3.57, 5.01],
            ],
            "interval": 1.0,
        },
        "observation": {"seed": 1},
    },
    # same floor as four_rooms_corridor, but the trajectory never enters
    # rooms 3 and 4: it sweeps the corridor, visits rooms 1-2, and only
    # lingers in front of the other two doorways, offset to each side so
    # oblique rays reach the side walls through the opening
    "four_rooms_peek": {
        "name": "four_rooms_peek",
        "spaces": [
            {"name": "corridor", "kind": "corridor", "bounds": [0.0, 30.0, 0.0, 2.0]},
            {"name": "room1", "kind": "room", "bounds": [0.0, 7.2, 2.1, 8.0]},
            {"name": "room2", "kind": "room", "bounds": [7.3, 14.5, 2.1, 8.0]},
            {"name": "room3", "kind": "room", "bounds": [14.6, 21.8, 2.1, 8.0]},
            {"name": "room4", "kind": "room", "bounds": [21.9, 30.0, 2.1, 8.0]},
        ],
        "doorways": [
            {"between": ["room1", "corridor"], "center": 3.6, "width": 1.0},
            {"between": ["room2", "corridor"], "center": 10.9, "width": 1.0},
            {"between": ["room3", "corridor"], "center": 18.2, "width": 1.0},
            {"between": ["room4", "corridor"], "center": 25.95, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [
                [0.97, 1.03], [29.03, 0.97], [26.83, 1.21], [25.03, 1.19],
                [19.13, 1.21], [17.27, 1.19], [10.87, 1.01], [10.87, 5.01],
                [10.87, 0.99], [3.57, 1.01], [3.57, 5.01],
            ],
            "interval": 0.5,
        },
        "observation": {"seed": 1},
    },
    # an L: long corridor east into a short one running north, joined at an
    # open junction (no wall), three rooms along the long leg
    "ell_corridor_rooms": {
        "name": "ell_corridor_rooms",
        "spaces": [
            {"name": "hall", "kind": "corridor", "bounds": [0.0, 30.0, 0.0, 2.0]},
            {"name": "leg", "kind": "corridor", "bounds": [28.0, 30.0, 2.0, 14.0]},
            {"name": "room1", "kind": "room", "bounds": [0.0, 9.0, 2.1, 8.0]},
            {"name": "room2", "kind": "room", "bounds": [9.1, 18.2, 2.1, 8.0]},
            {"name": "room3", "kind": "room", "bounds": [18.3, 27.9, 2.1, 8.0]},
        ],
        "doorways": [
            {"between": ["room1", "hall"], "center": 4.5, "width": 1.0},
            {"between": ["room2", "hall"], "center": 13.65, "width": 1.0},
            {"between": ["room3", "hall"], "center": 23.1, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [
                [0.97, 1.03], [28.97, 0.97], [28.97, 13.03], [28.97, 1.03],
                [23.13, 1.03], [23.13, 5.01], [23.13, 1.01], [13.67, 1.01],
                [13.67, 5.01], [13.67, 0.99], [4.53, 0.99], [4.53, 5.01],
            ],
            "interval": 1.0,
        },
        "observation": {"seed": 1},
    },
    # six offices on both sides of a central corridor, jambs staggered so
    # opposite rooms share no x-plane
    "office_block": {
        "name": "office_block",
        "spaces": [
            {"name": "corridor", "kind": "corridor", "bounds": [0.0, 30.0, 6.0, 8.0]},
            {"name": "b1", "kind": "room", "bounds": [0.0, 9.5, 0.0, 5.9]},
            {"name": "b2", "kind": "room", "bounds": [9.6, 19.5, 0.0, 5.9]},
            {"name": "b3", "kind": "room", "bounds": [19.6, 30.0, 0.0, 5.9]},
            {"name": "a1", "kind": "room", "bounds": [0.0, 10.5, 8.1, 14.0]},
            {"name": "a2", "kind": "room", "bounds": [10.6, 21.0, 8.1, 14.0]},
            {"name": "a3", "kind": "room", "bounds": [21.1, 30.0, 8.1, 14.0]},
        ],
        "doorways": [
            {"between": ["b1", "corridor"], "center": 4.75, "width": 1.0},
            {"between": ["b2", "corridor"], "center": 14.55, "width": 1.0},
            {"between": ["b3", "corridor"], "center": 24.8, "width": 1.0},
            {"between": ["a1", "corridor"], "center": 5.25, "width": 1.0},
            {"between": ["a2", "corridor"], "center": 15.8, "width": 1.0},
            {"between": ["a3", "corridor"], "center": 25.55, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [
                [0.97, 7.03], [29.03, 7.03], [24.83, 7.03], [24.83, 3.01],
                [24.83, 7.05], [25.57, 7.05], [25.57, 11.01], [25.57, 7.03],
                [15.77, 7.03], [15.77, 11.01], [15.77, 7.01], [14.53, 7.01],
                [14.53, 3.01], [14.53, 7.03], [5.27, 7.03], [5.27, 11.01],
                [5.27, 7.01], [4.73, 7.01], [4.73, 3.01],
            ],
            "interval": 1.0,
        },
        "observation": {"seed": 1},
    },
    # 2x2 room grid observed from the north-east room only; two doorways
    # let rays reach the far walls of the west and south neighbours, so
    # exactly 6 of the 8 world planes collect points
    "four_rooms_quad": {
        "name": "four_rooms_quad",
        "spaces": [
            {"name": "sw", "kind": "room", "bounds": [0.0, 5.0, 0.0, 5.0]},
            {"name": "se", "kind": "room", "bounds": [5.1, 10.0, 0.0, 5.0]},
            {"name": "nw", "kind": "room", "bounds": [0.0, 5.0, 5.1, 10.0]},
            {"name": "ne", "kind": "room", "bounds": [5.1, 10.0, 5.1, 10.0]},
        ],
        "doorways": [
            {"between": ["nw", "ne"], "center": 7.5, "width": 1.0},
            {"between": ["se", "ne"], "center": 7.5, "width": 1.0},
        ],
        "trajectory": {
            "waypoints": [[7.53, 7.51], [5.63, 7.47], [7.47, 5.63]],
            "interval": 0.5,
        },
        "observation": {"seed": 3},
    },
    # a room with a 0.4 m hole to the outside (too narrow for a doorway);
    # the extra grid margin leaves room for the leaked free cells, which no
    # candidate rectangle can cover
    "leaky_room": {
        "name": "leaky_room",
        "margin": 1.0,
        "spaces": [
            {"name": "room", "kind": "room", "bounds": [0.0, 6.0, 0.0, 6.0]},
        ],
        "gaps": [
            {"space": "room", "side": "west", "center": 3.0, "width": 0.4},
        ],
        "trajectory": {"waypoints": [[3.03, 2.99]]},
        "observation": {"seed": 2},
    },
}

# the pruning-fraction benchmark set
BENCHMARK_NAMES = (
    "one_room",
    "two_rooms_shared_wall",
    "three_rooms_corridor",
    "four_rooms_corridor",
    "ell_corridor_rooms",
    "office_block",
)

# fully observed worlds for ground-truth recovery runs
RECOVERY_NAMES = (
    "one_room",
    "two_rooms_shared_wall",
    "three_rooms_corridor",
    "four_rooms_corridor",
    "ell_corridor_rooms",
)


def names() -> list[str]:
    return sorted(_SPECS)


def world_spec(name: str) -> dict:
    if name not in _SPECS:
        raise KeyError(f"unknown fixture {name!r} (have {', '.join(names())})")
    return copy.deepcopy(_SPECS[name])


def build_world(name: str) -> World:
    return generate_world(world_spec(name))


def observe(name: str, **overrides) -> tuple[World, Scene]:
    """Build a fixture world and observe it along its default trajectory.

    Keyword overrides replace entries of the observation block (noise,
    dropout, seed, max_range, ...).
    """
    spec = world_spec(name)
    spec.setdefault("observation", {}).update(overrides)
    world = generate_world(spec)
    return world, observe_from_spec(world, build_trajectory(world))
