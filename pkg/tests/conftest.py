import numpy as np
import pytest
from hypothesis import settings

from mvsync.model import (
    BeatGrid,
    BoundaryKind,
    BoundaryList,
    ClipBundle,
    GenreLabel,
    LikelihoodCurve,
    VideoGenre,
)

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


def make_curve(n_frames=250, rate=25.0, spikes=()):
    """Zero curve with unit impulses at the given frame indices."""
    values = np.zeros(n_frames)
    for frame in spikes:
        values[frame] = 1.0
    return LikelihoodCurve(values, rate)


def make_bundle(
    clip_id="clip",
    duration_s=10.0,
    bpm=120.0,
    meter=4,
    downbeats=(0.0, 2.0, 4.0, 6.0, 8.0),
    segments=(4.0,),
    curve=None,
    genres=GenreLabel("Pop", VideoGenre.CONCEPT),
):
    if curve is None:
        curve = make_curve(int(round(duration_s * 25.0)))
    return ClipBundle(
        clip_id=clip_id,
        duration_s=duration_s,
        grid=BeatGrid.from_tempo(bpm, meter),
        downbeats=BoundaryList(BoundaryKind.DOWNBEAT, tuple(downbeats)),
        segments=BoundaryList(BoundaryKind.SEGMENT, tuple(segments)),
        curve=curve,
        genres=genres,
    )


@pytest.fixture
def service_client():
    from fastapi.testclient import TestClient

    from mvsync.service.app import create_app

    with TestClient(create_app()) as client:
        yield client
