"""Dataset generation and loading, sub-sampling, and record persistence.

Synthetic data are Gaussian blobs with class centers on orthogonal axes,
split 80/20 by seed. Real image data come in through the big-endian IDX
container (magic 0x00000803 for images, 0x00000801 for labels). Grid
results persist as a plain CSV with a fixed header and 17-significant-
digit floats, so a write/read roundtrip is lossless for finite values.
Run configs are flat ``key=value`` text files.
"""

import csv
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import RunRecord
from .errors import DataFormatError, InvalidParameterError
from .models import Dataset
from .rng import RngStream

IDX_IMAGES_MAGIC = 0x00000803
IDX_LABELS_MAGIC = 0x00000801

RECORD_HEADER = ["alpha", "sigma1", "d", "width", "n", "seed", "gap", "i_hat", "g_hat", "diverged"]


@dataclass(frozen=True)
class SyntheticSpec:
    n_per_class: int
    input_dim: int
    classes: int
    separation: float
    noise_std: float
    seed: int

    def __post_init__(self):
        if self.n_per_class < 1 or self.input_dim < 1:
            raise InvalidParameterError("n_per_class and input_dim must be positive")
        if self.classes < 2:
            raise InvalidParameterError("need at least 2 classes")
        if self.separation < 0.0 or self.noise_std <= 0.0:
            raise InvalidParameterError("separation must be >= 0 and noise_std > 0")


def generate_synthetic(spec: SyntheticSpec) -> tuple[Dataset, Dataset]:
    """Gaussian blobs with centers separation * e_c; returns (train, test)."""
    if spec.classes > spec.input_dim:
        raise InvalidParameterError(
            f"class count {spec.classes} exceeds input dim {spec.input_dim}"
        )
    rng = RngStream(spec.seed)
    total = spec.classes * spec.n_per_class
    features = spec.noise_std * rng.gen.standard_normal((total, spec.input_dim))
    labels = np.repeat(np.arange(spec.classes), spec.n_per_class)
    for c in range(spec.classes):
        features[labels == c, c] += spec.separation
    perm = rng.gen.permutation(total)
    features, labels = features[perm], labels[perm]
    n_train = 4 * total // 5
    train = Dataset(features[:n_train], labels[:n_train], spec.classes)
    test = Dataset(features[n_train:], labels[n_train:], spec.classes)
    return train, test


def _read_be32(buf: bytes, offset: int, path: str, field: str) -> int:
    if offset + 4 > len(buf):
        raise DataFormatError(f"{path}: truncated while reading {field}")
    return struct.unpack_from(">i", buf, offset)[0]


def load_idx(images_path, labels_path, num_classes: int | None = None) -> Dataset:
    """Parse an IDX image/label file pair into a Dataset with pixels in [0, 1]."""
    images_path, labels_path = str(images_path), str(labels_path)
    img = Path(images_path).read_bytes()
    magic = _read_be32(img, 0, images_path, "images magic")
    if magic != IDX_IMAGES_MAGIC:
        raise DataFormatError(
            f"{images_path}: bad images magic {magic:#010x}, expected {IDX_IMAGES_MAGIC:#010x}"
        )
    count = _read_be32(img, 4, images_path, "image count")
    rows = _read_be32(img, 8, images_path, "row count")
    cols = _read_be32(img, 12, images_path, "column count")
    pixels = img[16:]
    if len(pixels) != count * rows * cols:
        raise DataFormatError(
            f"{images_path}: truncated pixel data, expected {count * rows * cols} "
            f"bytes, found {len(pixels)}"
        )

    lab = Path(labels_path).read_bytes()
    lmagic = _read_be32(lab, 0, labels_path, "labels magic")
    if lmagic != IDX_LABELS_MAGIC:
        raise DataFormatError(
            f"{labels_path}: bad labels magic {lmagic:#010x}, expected {IDX_LABELS_MAGIC:#010x}"
        )
    lcount = _read_be32(lab, 4, labels_path, "label count")
    if len(lab) - 8 != lcount:
        raise DataFormatError(
            f"{labels_path}: truncated label data, expected {lcount} bytes, "
            f"found {len(lab) - 8}"
        )
    if lcount != count:
        raise DataFormatError(
            f"count mismatch: {count} images but {lcount} labels"
        )

    features = np.frombuffer(pixels, dtype=np.uint8).astype(float).reshape(count, rows * cols)
    features /= 255.0
    labels = np.frombuffer(lab, dtype=np.uint8, offset=8).astype(np.int64)
    classes = num_classes if num_classes is not None else int(labels.max()) + 1
    if labels.size and labels.max() >= classes:
        raise DataFormatError(
            f"{labels_path}: label value {int(labels.max())} out of range for "
            f"{classes} classes"
        )
    return Dataset(features, labels, classes)


def write_idx_images(path, images: np.ndarray) -> None:
    """Serialize a (count, rows, cols) uint8 array as an IDX image file."""
    images = np.asarray(images, dtype=np.uint8)
    count, rows, cols = images.shape
    with open(path, "wb") as f:
        f.write(struct.pack(">iiii", IDX_IMAGES_MAGIC, count, rows, cols))
        f.write(images.tobytes())


def write_idx_labels(path, labels: np.ndarray) -> None:
    labels = np.asarray(labels, dtype=np.uint8)
    with open(path, "wb") as f:
        f.write(struct.pack(">ii", IDX_LABELS_MAGIC, labels.size))
        f.write(labels.tobytes())


def subsample(data: Dataset, fraction: float, seed: int) -> Dataset:
    """Uniform without-replacement row subset of size round(fraction * n).

    Kept rows preserve their original order.
    """
    if not 0.0 < fraction <= 1.0:
        raise InvalidParameterError(f"fraction must be in (0, 1], got {fraction}")
    m = int(round(fraction * data.n))
    if m < 1:
        raise InvalidParameterError("fraction yields an empty subset")
    rng = RngStream(seed)
    idx = np.sort(rng.gen.choice(data.n, size=m, replace=False))
    return Dataset(data.features[idx], data.labels[idx], data.num_classes)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_records(path, records) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow(_record_row(r))


def _record_row(r: RunRecord) -> list[str]:
    return [
        _fmt(r.alpha),
        _fmt(r.sigma1),
        str(r.d),
        str(r.width),
        str(r.n),
        str(r.seed),
        _fmt(r.gap),
        _fmt(r.i_hat),
        _fmt(r.g_hat),
        "true" if r.diverged else "false",
    ]


def append_records(path, records) -> None:
    """Append rows, writing the header first if the file does not exist."""
    path = Path(path)
    new_file = not path.exists()
    with open(path, "a", newline="") as f:
        w = csv.writer(f)
        if new_file:
            w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow(_record_row(r))


def read_records(path) -> list[RunRecord]:
    with open(path, newline="") as f:
        reader = csv.reader(f)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError(f"{path}: empty records file") from None
        if header != RECORD_HEADER:
            raise DataFormatError(
                f"{path}: header mismatch, expected {','.join(RECORD_HEADER)}"
            )
        records = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(RECORD_HEADER):
                raise DataFormatError(f"{path}:{lineno}: expected {len(RECORD_HEADER)} fields")
            try:
                records.append(
                    RunRecord(
                        alpha=float(row[0]),
                        sigma1=float(row[1]),
                        d=int(row[2]),
                        width=int(row[3]),
                        n=int(row[4]),
                        seed=int(row[5]),
                        gap=float(row[6]),
                        i_hat=float(row[7]),
                        g_hat=float(row[8]),
                        diverged={"true": True, "false": False}[row[9]],
                    )
                )
            except (ValueError, KeyError) as exc:
                raise DataFormatError(f"{path}:{lineno}: {exc}") from None
        return records


def parse_config(path) -> dict[str, str]:
    """Flat key=value config; '#' starts a comment, blank lines are skipped."""
    out: dict[str, str] = {}
    with open(path) as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise DataFormatError(f"{path}:{lineno}: expected key=value")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out
