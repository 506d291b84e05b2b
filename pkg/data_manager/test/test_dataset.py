import numpy as np

from data_manager.dataset import TrackWindowDataset, collate_windows
from data_manager.normalizer import NormStats
from data_manager.test.factory import random_window


def test_dataset_items_are_normalized():
    rng = np.random.default_rng(0)
    windows = [random_window(rng) for _ in range(3)]
    dataset = TrackWindowDataset(windows, NormStats())

    item = dataset[1]

    assert len(dataset) == 3
    assert item['index'] == 1
    np.testing.assert_allclose(item['boxes'] * [455., 256., 455., 256.], windows[1].boxes)
    assert dataset.raw_windows[1] is windows[1]
    assert dataset.windows[1].normalized


def test_collate_windows():
    rng = np.random.default_rng(1)
    dataset = TrackWindowDataset([random_window(rng) for _ in range(5)], NormStats())

    batch, indices = collate_windows([dataset[4], dataset[0]])

    assert batch.batch_size == 2
    assert np.array_equal(batch.boxes[0], dataset[4]['boxes'])
    assert indices.tolist() == [4, 0]
