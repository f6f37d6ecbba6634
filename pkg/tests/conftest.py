"""Shared test fixtures.

Observing a benchmark world costs a ray-casting pass, so worlds, scenes,
and batch results are cached per session and shared read-only; every
domain object involved is frozen.
"""
import pytest

from floorplanner import fixtures as fx
from floorplanner.pipeline import PipelineParams, run_batch

_scenes: dict = {}
_batches: dict = {}


def observe_cached(name: str, **overrides):
    key = (name, tuple(sorted(overrides.items())))
    if key not in _scenes:
        _scenes[key] = fx.observe(name, **overrides)
    return _scenes[key]


def batch_cached(name: str, **overrides):
    key = (name, tuple(sorted(overrides.items())))
    if key not in _batches:
        world, scene = observe_cached(name, **overrides)
        _batches[key] = (world, scene, run_batch(scene, PipelineParams()))
    return _batches[key]


@pytest.fixture(scope="session")
def observed():
    return observe_cached


@pytest.fixture(scope="session")
def batched():
    return batch_cached
