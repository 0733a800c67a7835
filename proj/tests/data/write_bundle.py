"""Writes a toy bundle with numpy and checks the C++ loader reads it back."""

import json
import struct
import subprocess
import sys
from pathlib import Path

import numpy as np


def write_matrix(path, m):
    m = np.ascontiguousarray(m, dtype="<f4")
    with open(path, "wb") as f:
        f.write(b"ZFB1")
        f.write(struct.pack("<QQ", *m.shape))
        f.write(m.tobytes())


def write_labels(path, labels):
    labels = np.asarray(labels, dtype="<u4")
    with open(path, "wb") as f:
        f.write(b"ZFL1")
        f.write(struct.pack("<Q", labels.size))
        f.write(labels.tobytes())


def main():
    checker, out = sys.argv[1], Path(sys.argv[2])
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(5)
    num_seen, num_unseen, d_v, d_a = 3, 2, 4, 6
    labels = [0, 1, 2, 0, 1, 2, 3, 4, 3]
    features = rng.normal(size=(len(labels), d_v)).astype(np.float32)
    attributes = rng.uniform(size=(num_seen + num_unseen, d_a)).astype(np.float32)
    splits = {"train_seen": [0, 1, 2], "test_seen": [3, 4, 5], "test_unseen": [6, 7, 8]}
    write_matrix(out / "features.zfb", features)
    write_matrix(out / "attributes.zfb", attributes)
    write_labels(out / "labels.zfb", labels)
    meta = {
        "version": 1,
        "d_v": d_v,
        "d_a": d_a,
        "num_seen": num_seen,
        "num_unseen": num_unseen,
        "class_names": [f"c{i}" for i in range(num_seen + num_unseen)],
        "splits": splits,
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2))

    got = json.loads(subprocess.run([checker, str(out)], check=True, capture_output=True, text=True).stdout)
    assert got["features_shape"] == [len(labels), d_v], got
    assert got["attributes_shape"] == [num_seen + num_unseen, d_a], got
    assert got["labels"] == labels, got
    assert got["test_unseen"] == splits["test_unseen"], got
    assert got["num_seen"] == num_seen and got["num_unseen"] == num_unseen, got
    assert np.allclose(got["features_first_row"], features[0].astype(np.float64), rtol=0, atol=0), got
    assert abs(got["features_sum"] - features.astype(np.float64).sum()) < 1e-9, got
    assert abs(got["attributes_sum"] - attributes.astype(np.float64).sum()) < 1e-9, got
    print("bundle interop ok")


if __name__ == "__main__":
    main()
