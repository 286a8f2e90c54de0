#!/usr/bin/env python3
"""Writes the byte-level fixtures used by the grid IO tests."""
import struct
from pathlib import Path

here = Path(__file__).parent

# 5 x 3 occupancy grid, rows from minimum y.
cells = [
    1, 0, 0, 0, 2,
    0, 0, 1, 0, 0,
    0, 2, 0, 0, 1,
]
ogrid = b"OGRD" + struct.pack("<IIfddd", 5, 3, 0.1, -0.25, 1.5, 0.5) + bytes(cells)
(here / "golden.ogrid").write_bytes(ogrid)

# 3 x 2 prediction grid.
p_path = [0.0, 0.25, 1.0, 0.5, 0.75, 0.125]
sin_t = [0.0, 1.0, -1.0, 0.6, -0.8, 0.0]
cos_t = [1.0, 0.0, 0.0, 0.8, 0.6, -1.0]
pgrid = b"PGRD" + struct.pack("<IIfddd", 3, 2, 0.234375, -30.0, -30.0, 0.0)
for plane in (p_path, sin_t, cos_t):
    pgrid += struct.pack("<%df" % len(plane), *plane)
(here / "golden.pgrid").write_bytes(pgrid)
