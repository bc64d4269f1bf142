"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import segfuse


def test_rle_round_trip():
    rng = np.random.default_rng(11)
    arr = rng.random((17, 23)) < 0.4
    mask = segfuse.BinaryMask.from_numpy(arr)
    assert mask.area() == int(arr.sum())
    counts = segfuse.rle_encode(mask)
    back = segfuse.rle_decode(counts, mask.width, mask.height)
    assert np.array_equal(back.to_numpy(), arr)


def test_iou_and_mean_match_numpy():
    a = np.zeros((8, 8), dtype=bool)
    a[0:4, 0:4] = True
    b = np.zeros((8, 8), dtype=bool)
    b[2:6, 2:6] = True
    iou = segfuse.mask_iou(
        segfuse.BinaryMask.from_numpy(a), segfuse.BinaryMask.from_numpy(b)
    )
    assert iou == pytest.approx((a & b).sum() / (a | b).sum())

    scores = np.linspace(0.0, 1.0, 64).reshape(8, 8)
    mean = segfuse.mean_score_in_mask(
        segfuse.BinaryMask.from_numpy(a),
        segfuse.ScoreMap.from_numpy(scores),
    )
    assert mean == pytest.approx(scores[a].mean())


def test_fusion_partitions_by_mean_score():
    strong = np.zeros((10, 10), dtype=bool)
    strong[0:3, 0:3] = True
    weak = np.zeros((10, 10), dtype=bool)
    weak[6:9, 6:9] = True
    scores = np.zeros((10, 10))
    scores[strong] = 0.5
    scores[weak] = 0.01

    instances = [
        segfuse.InstancePrediction(1, 1, 0.9, segfuse.BinaryMask.from_numpy(strong)),
        segfuse.InstancePrediction(2, 1, 0.8, segfuse.BinaryMask.from_numpy(weak)),
    ]
    result = segfuse.fuse_instances(
        instances, segfuse.ScoreMap.from_numpy(scores), segfuse.FusionConfig(0.04)
    )
    assert [p.instance_id for p in result.accepted] == [1]
    assert [r.prediction.instance_id for r in result.rejected] == [2]
    assert result.rejected[0].mean_score < 0.04


def test_occlusion_grid_count():
    origins = segfuse.occlusion_grid(1920, 1080, segfuse.OcclusionConfig())
    assert len(origins) == 75190


def test_occlusion_heatmap_with_python_scorer():
    base = np.full((30, 40), 0.25)

    def scorer(window):
        return base  # position independent

    mask = np.zeros((30, 40), dtype=bool)
    mask[8:20, 10:30] = True
    heatmap = segfuse.occlusion_heatmap(
        segfuse.BinaryMask.from_numpy(mask),
        scorer,
        segfuse.OcclusionConfig(8, 6, 4, 0.5),
    )
    values = heatmap.to_numpy()
    assert values.shape == (heatmap.grid_height, heatmap.grid_width)
    assert np.nanmax(np.abs(values)) <= 1e-12


def test_synthetic_scene_end_to_end():
    config = segfuse.SceneConfig()
    config.image_width = 192
    config.image_height = 108
    config.seed = 5

    bundle = segfuse.generate_scene(config, 1)
    assert len(bundle.ground_truths) == 5
    assert len(bundle.predictions) == 10
    assert bundle.expected is not None
    assert bundle.expected.pre_fusion.precision == 0.5

    preds = segfuse.DetectionData()
    gts = segfuse.DetectionData()
    preds.images = [segfuse.ImageInfo(1, 192, 108)]
    gts.images = [segfuse.ImageInfo(1, 192, 108)]
    preds.predictions = {1: bundle.predictions}
    gts.ground_truths = {1: bundle.ground_truths}

    reports = segfuse.run_eval_pipeline(preds, gts, {1: bundle.score_map})
    assert reports.pre_fusion.precision == 0.5
    assert reports.post_fusion.precision == 1.0
    assert reports.post_fusion.recall == 1.0


def test_detection_file_round_trip(tmp_path):
    config = segfuse.SceneConfig()
    config.image_width = 64
    config.image_height = 48
    config.true_count = 2
    config.reflection_count = 2
    config.seed = 3
    bundle = segfuse.generate_scene(config, 1)

    data = segfuse.DetectionData()
    data.images = [segfuse.ImageInfo(1, 64, 48)]
    data.predictions = {1: bundle.predictions}
    data.ground_truths = {1: bundle.ground_truths}

    path = tmp_path / "d.json"
    segfuse.save_detection_file(data, path)
    loaded = segfuse.load_detection_file(path)
    assert [i.id for i in loaded.images] == [1]
    assert len(loaded.predictions[1]) == 4
    assert len(loaded.ground_truths[1]) == 2
    assert loaded.predictions[1][0].mask == bundle.predictions[0].mask


def test_score_map_round_trip(tmp_path):
    rng = np.random.default_rng(7)
    values = rng.random((12, 9))
    path = tmp_path / "m.pgm"
    segfuse.save_score_map(segfuse.ScoreMap.from_numpy(values), path)
    loaded = segfuse.load_score_map(path).to_numpy()
    assert np.abs(loaded - values).max() <= 1.0 / 131070.0 + 1e-15


def test_errors_are_translated():
    with pytest.raises(segfuse.Error):
        segfuse.rle_decode([5], 4, 4)  # counts do not cover the mask


def test_sweep_and_selection():
    config = segfuse.SceneConfig()
    config.image_width = 192
    config.image_height = 108
    batches = []
    for seed in range(3):
        config.seed = seed
        batches.append(segfuse.generate_scene(config, seed + 1))

    table = segfuse.sweep_thresholds(
        [b.predictions for b in batches],
        [b.ground_truths for b in batches],
        [b.score_map for b in batches],
        segfuse.default_sweep_grid(),
    )
    fps = [row.fp for row in table.rows]
    assert fps == sorted(fps, reverse=True)
    c = segfuse.select_threshold(table, segfuse.SelectionPolicy(0.01))
    assert 0.0 < c <= 0.2
