"""Race data ingestion: durations, split files, raw GPS tracks.

All times are integer deciseconds (0.1 s). Feasibility checks downstream rely
on exact integer sums, so nothing in this module stores a duration as a float.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, TrackError

EARTH_RADIUS_M = 6371008.8

SPLITS_HEADER = ["index", "length_m", "pace", "alt_delta_m"]
TRACK_HEADER = ["lat", "lon", "ele_m", "t_s"]

_DURATION_RE = re.compile(
    r"^(?:(?P<h>\d{1,2}):)?(?P<m>\d{1,2}):(?P<s>\d{2})(?:\.(?P<frac>\d{1,2}))?$"
)


class SegmentClass(enum.Enum):
    """Gradient class of one segment."""

    Flat = "Flat"
    Uphill = "Uphill"
    Downhill = "Downhill"


@dataclass(frozen=True)
class TrackPoint:
    """One timestamped GPS sample."""

    lat: float
    lon: float
    ele_m: float
    t_s: float


@dataclass(frozen=True)
class KmSplit:
    """One course segment: recorded pace and net altitude change.

    `length_m` is 1000 for full segments; only the last segment of a course
    may be shorter. `pace_ds` is the time spent in the segment, in
    deciseconds.
    """

    index: int
    length_m: float
    pace_ds: int
    alt_delta_m: float


def parse_duration(text: str) -> int:
    """Parse `M:SS.d` / `MM:SS.d` / `H:MM:SS.d` into deciseconds.

    The fraction is a single decisecond digit. A two-digit fraction is
    accepted only when the second digit is '0' (the style used by printed
    race tables); a missing fraction means `.0`.
    """
    m = _DURATION_RE.match(text.strip())
    if m is None:
        raise InputFormatError(f"malformed duration {text!r}: expected [H:]MM:SS.d")
    hours = int(m.group("h")) if m.group("h") else 0
    minutes = int(m.group("m"))
    seconds = int(m.group("s"))
    frac = m.group("frac") or "0"
    if minutes >= 60:
        raise InputFormatError(f"malformed duration {text!r}: minutes must be < 60")
    if seconds >= 60:
        raise InputFormatError(f"malformed duration {text!r}: seconds must be < 60")
    if len(frac) == 2:
        if frac[1] != "0":
            raise InputFormatError(
                f"malformed duration {text!r}: resolution is 0.1 s, "
                "second fractional digit must be 0"
            )
        frac = frac[0]
    return ((hours * 60 + minutes) * 60 + seconds) * 10 + int(frac)


def format_duration(ds: int) -> str:
    """Render deciseconds as `MM:SS.d`, or `HH:MM:SS.d` from one hour up."""
    if ds < 0:
        raise ValueError(f"duration must be non-negative, got {ds}")
    seconds, tenth = divmod(int(ds), 10)
    minutes, sec = divmod(seconds, 60)
    hours, minute = divmod(minutes, 60)
    if hours:
        return f"{hours:02d}:{minute:02d}:{sec:02d}.{tenth}"
    return f"{minute:02d}:{sec:02d}.{tenth}"


def _read_csv(data: bytes | str, expected_header: list[str], what: str):
    """Yield (row_number, row) for each data row; row 1 is the header."""
    if isinstance(data, bytes):
        try:
            text = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise InputFormatError(f"{what}: not valid UTF-8 ({exc})") from None
    else:
        text = data
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputFormatError(f"{what}: empty file, expected header "
                               f"{','.join(expected_header)}") from None
    if [h.strip() for h in header] != expected_header:
        raise InputFormatError(
            f"{what}: bad header {','.join(header)!r}, "
            f"expected {','.join(expected_header)!r}"
        )
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(expected_header):
            raise InputFormatError(
                f"{what}: row {row_no}: expected {len(expected_header)} fields, "
                f"got {len(row)}"
            )
        yield row_no, [cell.strip() for cell in row]


def _parse_float(cell: str, what: str, row_no: int, field: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise InputFormatError(
            f"{what}: row {row_no}: {field} {cell!r} is not a number"
        ) from None
    if not math.isfinite(value):
        raise InputFormatError(f"{what}: row {row_no}: {field} must be finite")
    return value


def parse_splits_csv(data: bytes | str) -> list[KmSplit]:
    """Parse a splits CSV (`index,length_m,pace,alt_delta_m`) into KmSplits.

    Indices must run 1..n in file order; only the final row may be shorter
    than 1000 m; every pace must be positive.
    """
    what = "splits csv"
    splits: list[KmSplit] = []
    partial_at: int | None = None
    for row_no, row in _read_csv(data, SPLITS_HEADER, what):
        expected_index = len(splits) + 1
        try:
            index = int(row[0])
        except ValueError:
            raise InputFormatError(
                f"{what}: row {row_no}: index {row[0]!r} is not an integer"
            ) from None
        if index != expected_index:
            raise InputFormatError(
                f"{what}: row {row_no}: index {index} out of order, "
                f"expected {expected_index}"
            )
        length = _parse_float(row[1], what, row_no, "length_m")
        if not 0.0 < length <= 1000.0:
            raise InputFormatError(
                f"{what}: row {row_no}: length_m must be in (0, 1000], got {length}"
            )
        if partial_at is not None:
            # A short segment earlier in the file means it was not final.
            raise InputFormatError(
                f"{what}: row {row_no}: partial segment at row {partial_at} "
                "is not the final row"
            )
        if length < 1000.0:
            partial_at = row_no
        try:
            pace = parse_duration(row[2])
        except InputFormatError as exc:
            raise InputFormatError(f"{what}: row {row_no}: {exc}") from None
        if pace <= 0:
            raise InputFormatError(f"{what}: row {row_no}: pace must be positive")
        alt_delta = _parse_float(row[3], what, row_no, "alt_delta_m")
        splits.append(KmSplit(index=index, length_m=length, pace_ds=pace,
                              alt_delta_m=alt_delta))
    return splits


def parse_track_points(data: bytes | str) -> list[TrackPoint]:
    """Parse a track CSV (`lat,lon,ele_m,t_s`) into TrackPoints."""
    what = "track csv"
    points: list[TrackPoint] = []
    for row_no, row in _read_csv(data, TRACK_HEADER, what):
        lat = _parse_float(row[0], what, row_no, "lat")
        lon = _parse_float(row[1], what, row_no, "lon")
        ele = _parse_float(row[2], what, row_no, "ele_m")
        t = _parse_float(row[3], what, row_no, "t_s")
        if not -90.0 <= lat <= 90.0:
            raise InputFormatError(
                f"{what}: row {row_no}: lat must be in [-90, 90], got {lat}"
            )
        if not -180.0 <= lon <= 180.0:
            raise InputFormatError(
                f"{what}: row {row_no}: lon must be in [-180, 180], got {lon}"
            )
        if points and t <= points[-1].t_s:
            raise InputFormatError(
                f"{what}: row {row_no}: timestamp {t} not after previous "
                f"{points[-1].t_s}"
            )
        points.append(TrackPoint(lat=lat, lon=lon, ele_m=ele, t_s=t))
    return points


def haversine_m(lat1: float, lon1: float, lat2: float, lon2: float) -> float:
    """Great-circle distance in meters (mean Earth radius, elevation ignored)."""
    phi1 = math.radians(lat1)
    phi2 = math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    a = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(a))


def aggregate_track(points: list[TrackPoint],
                    segment_length: float = 1000.0) -> list[KmSplit]:
    """Aggregate raw track points into fixed-length splits.

    Segment boundaries fall every `segment_length` meters of cumulative
    great-circle distance; time and elevation at a boundary are linearly
    interpolated between the bracketing points. The final split carries the
    remainder (or a full segment when the total is an exact multiple).
    Standing time at an exact boundary belongs to the following segment;
    trailing standing time belongs to the final one.
    """
    if len(points) < 2:
        raise TrackError(f"need at least 2 track points, got {len(points)}")
    if segment_length <= 0:
        raise TrackError(f"segment_length must be positive, got {segment_length}")

    legs = np.array(
        [haversine_m(a.lat, a.lon, b.lat, b.lon)
         for a, b in zip(points[:-1], points[1:])],
        dtype=np.float64,
    )
    cum = np.concatenate([[0.0], np.cumsum(legs)])
    total = float(cum[-1])
    if total <= 0.0:
        raise TrackError("track has zero total distance")

    times = np.array([p.t_s for p in points], dtype=np.float64)
    eles = np.array([p.ele_m for p in points], dtype=np.float64)

    def at(pos: float) -> tuple[float, float]:
        # side="left": a boundary landing exactly on a point takes that
        # point's earliest occurrence, so standing time goes to the next
        # segment.
        idx = int(np.searchsorted(cum, pos, side="left"))
        if idx == 0:
            return float(times[0]), float(eles[0])
        span = cum[idx] - cum[idx - 1]
        frac = (pos - cum[idx - 1]) / span
        t = times[idx - 1] + frac * (times[idx] - times[idx - 1])
        e = eles[idx - 1] + frac * (eles[idx] - eles[idx - 1])
        return float(t), float(e)

    boundaries: list[float] = []
    m = 1
    while m * segment_length < total:
        boundaries.append(m * segment_length)
        m += 1

    marks = [(0.0, float(times[0]), float(eles[0]))]
    for pos in boundaries:
        t, e = at(pos)
        marks.append((pos, t, e))
    marks.append((total, float(times[-1]), float(eles[-1])))

    splits: list[KmSplit] = []
    for i in range(1, len(marks)):
        pos0, t0, e0 = marks[i - 1]
        pos1, t1, e1 = marks[i]
        pace = round((t1 - t0) * 10.0)
        if pace <= 0:
            raise TrackError(
                f"segment {i} covers {pos1 - pos0:.1f} m in under 0.05 s; "
                "pace would round to zero"
            )
        splits.append(
            KmSplit(index=i, length_m=pos1 - pos0, pace_ds=int(pace),
                    alt_delta_m=e1 - e0)
        )
    return splits


def classify_segment(alt_delta: float) -> SegmentClass:
    """Classify a net altitude change: beyond +/-1 m is Uphill/Downhill.

    Exactly +/-1 m stays Flat (the threshold is strict).
    """
    if not math.isfinite(alt_delta):
        raise InputFormatError(f"alt_delta must be finite, got {alt_delta}")
    if alt_delta > 1.0:
        return SegmentClass.Uphill
    if alt_delta < -1.0:
        return SegmentClass.Downhill
    return SegmentClass.Flat
