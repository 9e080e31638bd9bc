import numpy as np
import pytest

from gencolor.colorspace import (
    ColorRGB8,
    ciede2000_array,
    lab_to_srgb_array,
    srgb_to_lab_array,
)
from gencolor.association import (
    ACCENT_K,
    BIN_RESOLUTION,
    BinHistogram,
    EmptyMaskError,
    GROUPING_THRESHOLD,
    MAX_GROUPS,
    MIN_GROUP_SIZE,
    NoValidGroupsError,
    TOP_COLOR_BAND,
    accent_colors,
    compose_palettes,
    discretize,
    group_images,
    group_primary,
    image_dominant,
    kmeans_plusplus_seeds,
    summarize_image,
)
from gencolor.generation import ImageSample, ImageSource
from gencolor.segmentation import SegmentMask, whole_image_mask


def make_sample(pixels, identifier="img"):
    return ImageSample(identifier, np.asarray(pixels, dtype=np.uint8), ImageSource.FIXTURE)


def uniform_sample(rgb, side=8, identifier="img"):
    pixels = np.tile(np.array(rgb, dtype=np.uint8), (side, side, 1))
    return make_sample(pixels, identifier)


def naive_histogram(pixels, mask_bits, stride):
    """Per-pixel loop oracle for discretize."""
    counts = np.zeros(4096, dtype=np.int64)
    sums = np.zeros((4096, 3))
    h, w = pixels.shape[:2]
    for y in range(0, h, stride):
        for x in range(0, w, stride):
            if not mask_bits[y, x]:
                continue
            r, g, b = (int(v) for v in pixels[y, x])
            idx = (r // 16) * 256 + (g // 16) * 16 + (b // 16)
            counts[idx] += 1
            sums[idx] += (r, g, b)
    return counts, sums


def summary_for_color(rgb, identifier, side=4):
    sample = uniform_sample(rgb, side, identifier)
    return summarize_image(sample, whole_image_mask(sample))


class TestDiscretize:
    def test_uniform_image_single_bin(self):
        sample = uniform_sample((200, 40, 40), side=8)
        hist = discretize(sample, whole_image_mask(sample))
        idx = np.flatnonzero(hist.counts)
        assert list(idx) == [12 * 256 + 2 * 16 + 2]
        assert hist.total == 64

    def test_black_white_halves(self):
        pixels = np.zeros((8, 8, 3), dtype=np.uint8)
        pixels[:4] = 255
        sample = make_sample(pixels)
        hist = discretize(sample, whole_image_mask(sample))
        assert hist.counts[15 * 256 + 15 * 16 + 15] == 32
        assert hist.counts[0] == 32

    @pytest.mark.parametrize("stride", [1, 2, 3])
    def test_matches_naive_loop_oracle(self, stride):
        rng = np.random.default_rng(8)
        pixels = rng.integers(0, 256, (17, 13, 3)).astype(np.uint8)
        mask_bits = rng.random((17, 13)) > 0.3
        hist = discretize(make_sample(pixels), SegmentMask(mask_bits), stride)
        counts, sums = naive_histogram(pixels, mask_bits, stride)
        assert np.array_equal(hist.counts, counts)
        assert np.allclose(hist.sums, sums)

    def test_mass_conservation(self):
        rng = np.random.default_rng(9)
        pixels = rng.integers(0, 256, (20, 20, 3)).astype(np.uint8)
        mask_bits = rng.random((20, 20)) > 0.5
        hist = discretize(make_sample(pixels), SegmentMask(mask_bits), 2)
        assert hist.total == int(np.count_nonzero(mask_bits[::2, ::2]))

    def test_empty_mask_raises(self):
        sample = uniform_sample((10, 10, 10))
        with pytest.raises(EmptyMaskError):
            discretize(sample, SegmentMask(np.zeros((8, 8), dtype=bool)))

    def test_unmasked_pixels_ignored(self):
        pixels = np.zeros((4, 4, 3), dtype=np.uint8)
        pixels[0, 0] = (255, 255, 255)
        bits = np.zeros((4, 4), dtype=bool)
        bits[0, 0] = True
        hist = discretize(make_sample(pixels), SegmentMask(bits))
        assert hist.total == 1


class TestImageDominant:
    def test_single_bin_mean_color(self):
        hist = BinHistogram.empty()
        hist.counts[100] = 4
        hist.sums[100] = (400, 240, 160)  # means (100, 60, 40)
        assert image_dominant(hist) == ColorRGB8(100, 60, 40)

    def test_tie_broken_by_lowest_bin_index(self):
        hist = BinHistogram.empty()
        for idx, rgb in ((50, (48, 48, 32)), (40, (32, 128, 8))):
            hist.counts[idx] = 10
            hist.sums[idx] = np.array(rgb) * 10
        assert image_dominant(hist) == ColorRGB8(32, 128, 8)

    def test_matches_argmax_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            hist = BinHistogram.empty()
            idx = rng.choice(4096, size=20, replace=False)
            hist.counts[idx] = rng.integers(1, 50, 20)
            # member pixel means consistent with each bin's 16-value range
            for i in idx:
                r, g, b = (i >> 8) & 15, (i >> 4) & 15, i & 15
                base = np.array([r * 16 + 7, g * 16 + 7, b * 16 + 7], dtype=float)
                hist.sums[i] = base * hist.counts[i]
            best = min(
                range(4096),
                key=lambda j: (-hist.counts[j], j),
            )
            expected = np.rint(hist.sums[best] / hist.counts[best]).astype(int)
            got = image_dominant(hist)
            assert (got.r, got.g, got.b) == tuple(expected)


def brute_force_grouping(dominants_lab, ids, threshold):
    """Leader clustering oracle over (id-sorted) items."""
    order = sorted(range(len(ids)), key=lambda i: ids[i])
    groups = []  # (leader_lab, member indices)
    for i in order:
        for leader, members in groups:
            d = float(ciede2000_array(dominants_lab[i], leader))
            if d < threshold:
                members.append(i)
                break
        else:
            groups.append((dominants_lab[i], [i]))
    return groups


class TestGroupImages:
    def test_all_same_dominant_one_group(self):
        summaries = [summary_for_color((200, 40, 40), f"i{k}") for k in range(10)]
        groups = group_images(summaries)
        assert len(groups) == 1
        assert len(groups[0].member_ids) == 10

    def test_small_group_dropped(self):
        summaries = [summary_for_color((200, 40, 40), f"r{k}") for k in range(4)]
        summaries += [summary_for_color((30, 180, 60), f"g{k}") for k in range(2)]
        groups = group_images(summaries)
        assert len(groups) == 1
        assert all(m.startswith("r") for m in groups[0].member_ids)

    def test_all_groups_too_small(self):
        summaries = [summary_for_color((200, 40, 40), "a"),
                     summary_for_color((30, 180, 60), "b")]
        with pytest.raises(NoValidGroupsError):
            group_images(summaries)

    def test_seeded_clusters_recovered_against_oracle(self):
        # 7 well-separated cluster centers; intra-cluster dE00 < 6,
        # inter-cluster dE00 > 30
        centers = np.array(
            [
                [55, 60, 40], [60, -55, 45], [40, 20, -60], [85, 0, 80],
                [20, 5, 5], [95, -5, 5], [50, -40, -40],
            ],
            dtype=float,
        )
        rng = np.random.default_rng(21)
        sizes = [6, 5, 4, 3, 3, 2, 1]  # last two fall below the minimum
        summaries = []
        labs = []
        ids = []
        n = 0
        for center, size in zip(centers, sizes):
            for _ in range(size):
                lab = center + rng.normal(0, 1.0, 3)
                rgb = lab_to_srgb_array(lab)
                identifier = f"img{n:03d}"
                summaries.append(summary_for_color(tuple(int(v) for v in rgb), identifier))
                labs.append(srgb_to_lab_array(summaries[-1].dominant.as_array()))
                ids.append(identifier)
                n += 1
        groups = group_images(summaries)
        oracle = brute_force_grouping(labs, ids, GROUPING_THRESHOLD)
        surviving = [members for _, members in oracle if len(members) >= MIN_GROUP_SIZE]
        assert len(groups) == min(MAX_GROUPS, len(surviving))
        got = {frozenset(g.member_ids) for g in groups}
        expected_sets = sorted(
            (frozenset(ids[i] for i in members) for members in surviving),
            key=len, reverse=True,
        )[:MAX_GROUPS]
        assert got == set(expected_sets)

    def test_permutation_invariant(self):
        rng = np.random.default_rng(31)
        bases = [(200, 40, 40), (30, 180, 60), (40, 60, 200)]
        summaries = [
            summary_for_color(
                tuple(int(np.clip(c + rng.integers(-12, 13), 0, 255)) for c in bases[k % 3]),
                f"p{k:02d}",
            )
            for k in range(12)
        ]
        a = group_images(list(summaries))
        shuffled = list(summaries)
        rng.shuffle(shuffled)
        b = group_images(shuffled)
        assert [sorted(g.member_ids) for g in a] == [sorted(g.member_ids) for g in b]

    def test_leaders_pairwise_separated(self):
        rng = np.random.default_rng(41)
        summaries = [
            summary_for_color(tuple(rng.integers(0, 256, 3)), f"q{k:02d}")
            for k in range(40)
        ]
        try:
            groups = group_images(summaries, min_members=1, max_groups=100)
        except NoValidGroupsError:
            pytest.skip("no groups")
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                d = float(ciede2000_array(groups[i].leader_lab, groups[j].leader_lab))
                assert d >= GROUPING_THRESHOLD


class TestGroupPrimary:
    def _group_from_bins(self, bins):
        """bins: list of ((r,g,b) mean color, count)."""
        hist = BinHistogram.empty()
        for rgb, count in bins:
            r, g, b = rgb
            idx = (r // 16) * 256 + (g // 16) * 16 + (b // 16)
            hist.counts[idx] += count
            hist.sums[idx] += np.array(rgb, dtype=float) * count
        from gencolor.association import ColorGroup

        return ColorGroup(member_ids=["x"], leader_lab=np.zeros(3), histogram=hist)

    def test_single_bin_primary_is_bin_color(self):
        group = self._group_from_bins([((200, 40, 40), 10)])
        primary, top = group_primary(group)
        assert primary == ColorRGB8(200, 40, 40)
        assert top == [ColorRGB8(200, 40, 40)]

    def test_two_close_bins_equal_counts_midpoint(self):
        a, b = (200, 40, 40), (208, 44, 44)
        group = self._group_from_bins([(a, 10), (b, 10)])
        primary, top = group_primary(group)
        lab_mid = (srgb_to_lab_array(np.array(a, float))
                   + srgb_to_lab_array(np.array(b, float))) / 2
        expected = lab_to_srgb_array(lab_mid)
        assert abs(primary.r - expected[0]) <= 1
        assert abs(primary.g - expected[1]) <= 1
        assert abs(primary.b - expected[2]) <= 1
        assert len(top) == 2

    def test_band_filtering_against_weighted_mean_oracle(self):
        dominant = np.array([55.0, 20.0, 10.0])
        offsets = [0.0, 2.0, 5.0, 6.9, 7.5, 20.0]  # dE00 targets along +L
        bins = []
        for i, target in enumerate(offsets):
            # walk along L until the CIEDE2000 target is met
            lab = dominant.copy()
            if target > 0:
                lo, hi = 0.0, 45.0
                for _ in range(60):
                    mid = (lo + hi) / 2
                    lab = dominant + np.array([mid, 0, 0])
                    if float(ciede2000_array(lab, dominant)) < target:
                        lo = mid
                    else:
                        hi = mid
            rgb = tuple(int(v) for v in lab_to_srgb_array(lab))
            bins.append((rgb, 100 if i == 0 else 10))
        group = self._group_from_bins(bins)

        # independent oracle: plain loops over the aggregated histogram
        hist = group.histogram
        best = None
        for idx in range(4096):
            if hist.counts[idx] == 0:
                continue
            if best is None or hist.counts[idx] > hist.counts[best]:
                best = idx
        dom_lab = srgb_to_lab_array(hist.sums[best] / hist.counts[best])
        labs, weights = [], []
        excluded = 0
        for idx in range(4096):
            if hist.counts[idx] == 0:
                continue
            rep_lab = srgb_to_lab_array(hist.sums[idx] / hist.counts[idx])
            if float(ciede2000_array(rep_lab, dom_lab)) <= TOP_COLOR_BAND:
                labs.append(rep_lab)
                weights.append(int(hist.counts[idx]))
            else:
                excluded += 1
        assert excluded >= 1  # the far targets must fall outside the band

        primary, top = group_primary(group)
        assert len(top) == len(labs)
        oracle_lab = np.average(np.array(labs), axis=0, weights=np.array(weights))
        oracle_rgb = lab_to_srgb_array(oracle_lab)
        assert abs(primary.r - oracle_rgb[0]) <= 1
        assert abs(primary.g - oracle_rgb[1]) <= 1
        assert abs(primary.b - oracle_rgb[2]) <= 1

    def test_primary_within_top_color_bounding_box(self):
        rng = np.random.default_rng(52)
        for _ in range(20):
            bins = [
                (tuple(int(v) for v in rng.integers(0, 256, 3)), int(rng.integers(1, 40)))
                for _ in range(8)
            ]
            group = self._group_from_bins(bins)
            primary, top = group_primary(group)
            top_labs = srgb_to_lab_array(np.array([t.as_array() for t in top]))
            primary_lab = srgb_to_lab_array(primary.as_array())
            assert np.all(primary_lab >= top_labs.min(axis=0) - 1.0)
            assert np.all(primary_lab <= top_labs.max(axis=0) + 1.0)
            dom_lab = srgb_to_lab_array(group.group_dominant.as_array())
            max_d = float(ciede2000_array(top_labs, dom_lab).max())
            assert float(ciede2000_array(primary_lab, dom_lab)) <= max_d + 1.0


def lloyd_oracle(points, weights, centers, max_iter=100, tol=0.1):
    """Reference Lloyd iteration from given seeding."""
    centers = centers.copy()
    k = len(centers)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        assign = d2.argmin(axis=1)
        new = centers.copy()
        for j in range(k):
            sel = assign == j
            if sel.any():
                w = weights[sel]
                new[j] = (points[sel] * w[:, None]).sum(axis=0) / w.sum()
            else:
                worst = int(np.argmax(weights * d2[np.arange(len(points)), assign]))
                new[j] = points[worst]
        if np.sqrt(((new - centers) ** 2).sum(axis=1)).max() < tol:
            centers = new
            break
        centers = new
    d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    assign = d2.argmin(axis=1)
    cw = np.array([weights[assign == j].sum() for j in range(k)])
    return centers, cw


class TestAccentColors:
    def test_single_color_single_cluster(self):
        summaries = [summary_for_color((200, 40, 40), f"i{k}") for k in range(3)]
        accents = accent_colors(summaries, seed=0)
        assert len(accents) == 1
        assert accents[0][1] == pytest.approx(1.0)

    def test_exact_weight_ratio(self):
        pixels = np.zeros((4, 4, 3), dtype=np.uint8)
        pixels[:3] = (200, 40, 40)  # 12 pixels
        pixels[3:] = (40, 40, 200)  # 4 pixels
        sample = make_sample(pixels)
        summary = summarize_image(sample, whole_image_mask(sample))
        accents = accent_colors([summary], k=2, seed=0)
        assert [round(p, 6) for _, p in accents] == [0.75, 0.25]

    def test_proportions_sum_to_one(self):
        rng = np.random.default_rng(61)
        pixels = rng.integers(0, 256, (16, 16, 3)).astype(np.uint8)
        sample = make_sample(pixels)
        summary = summarize_image(sample, whole_image_mask(sample))
        accents = accent_colors([summary], seed=3)
        assert sum(p for _, p in accents) == pytest.approx(1.0, abs=1e-9)

    def test_well_separated_blobs_recovered(self):
        blob_labs = np.array(
            [[55, 40, 20], [58, -53, 42], [35, 30, -61], [81, -2, 76], [18, 9, 7]],
            dtype=float,
        )
        rng = np.random.default_rng(71)
        pixel_rows = []
        for lab in blob_labs:
            pts = lab + rng.normal(0, 1.0, (200, 3))
            pixel_rows.append(lab_to_srgb_array(pts))
        pixels = np.concatenate(pixel_rows).reshape(20, 50, 3)
        sample = make_sample(pixels)
        summary = summarize_image(sample, whole_image_mask(sample))
        accents = accent_colors([summary], k=5, seed=0)
        assert len(accents) == 5
        got_labs = srgb_to_lab_array(np.array([c.as_array() for c, _ in accents]))
        for lab in blob_labs:
            d = ciede2000_array(got_labs, lab)
            assert d.min() <= 2.0

    def test_matches_lloyd_oracle_from_same_seeding(self):
        rng = np.random.default_rng(81)
        for trial in range(100):
            n = int(rng.integers(2, 30))
            points = rng.uniform([0, -80, -80], [100, 80, 80], (n, 3))
            weights = rng.integers(1, 100, n).astype(float)
            k = int(rng.integers(1, min(6, n + 1)))
            seed = int(rng.integers(0, 10_000))
            seeds = kmeans_plusplus_seeds(points, weights, k, seed)
            oracle_centers, oracle_weights = lloyd_oracle(points, weights, seeds)

            from gencolor.association import _weighted_kmeans

            centers, cw = _weighted_kmeans(points, weights, k, seed)
            assert np.allclose(np.sort(cw), np.sort(oracle_weights))
            order_a = np.lexsort(centers.T)
            order_b = np.lexsort(oracle_centers.T)
            assert np.allclose(centers[order_a], oracle_centers[order_b], atol=1e-6)


class TestComposePalettes:
    def test_end_to_end_determinism(self, synthetic_samples):
        from gencolor.association import AssociationParams

        params = AssociationParams(stride=4, seed=7)
        summaries = [
            summarize_image(s, whole_image_mask(s), params.stride)
            for s in synthetic_samples[:10]
        ]
        a = compose_palettes(summaries, params, corpus_id="c")
        b = compose_palettes(summaries, params, corpus_id="c")
        assert [p.to_json() for p in a] == [p.to_json() for p in b]

    def test_accents_shared_across_groups(self):
        reds = [summary_for_color((200, 40, 40), f"r{k}") for k in range(3)]
        blues = [summary_for_color((40, 40, 200), f"b{k}") for k in range(3)]
        palettes = compose_palettes(reds + blues)
        assert len(palettes) == 2
        assert palettes[0].accents == palettes[1].accents
        assert palettes[0].primary != palettes[1].primary


class TestPaperConstants:
    def test_pipeline_parameters(self):
        assert BIN_RESOLUTION == 16
        assert GROUPING_THRESHOLD == 12.0
        assert TOP_COLOR_BAND == 7.0
        assert ACCENT_K == 5
        assert MAX_GROUPS == 5
        assert MIN_GROUP_SIZE == 3
