#!/usr/bin/env python3
"""Writes the popularity-partition fixture: first uses per (repo, feature)
with known adopter counts a year after release."""
import json
import sys
from datetime import date, datetime, timedelta, timezone

RELEASE = {"4.9": date(2022, 11, 15), "4.7": date(2022, 5, 24), "4.5": date(2021, 11, 17),
           "4.4": date(2021, 8, 26), "4.3": date(2021, 5, 26), "4.2": date(2021, 2, 23),
           "4.1": date(2020, 11, 19), "4.0": date(2020, 8, 20)}
VERSION = {"f0": "4.9", "f1": "4.9", "f2": "4.7", "f3": "4.7", "f4": "4.5", "f5": "4.5", "f6": "4.4",
           "f7": "4.3", "f8": "4.2", "f9": "4.1", "f10": "4.1", "f11": "4.0", "f12": "4.0"}
WINDOW_END = date(2022, 12, 31)

# Adopters by day 365, and late adopters that must not count.
WITHIN = {"f4": 60, "f9": 48, "f11": 40, "f7": 33, "f12": 27, "f10": 22,
          "f2": 20, "f1": 14, "f8": 11, "f3": 9, "f0": 7, "f5": 5, "f6": 4}
LATE = {"f6": 3, "f2": 2, "f5": 6, "f12": 1}

events = []
for feature, n in WITHIN.items():
    release = RELEASE[VERSION[feature]]
    last = min(365, (WINDOW_END - release).days)
    for i in range(n + LATE.get(feature, 0)):
        if i < n:
            offset = -20 + (i * 37) % (last + 21)
            stamp = datetime.combine(release + timedelta(days=offset), datetime.min.time(), timezone.utc)
            stamp += timedelta(hours=23, minutes=59) if i % 2 else timedelta(0)
        else:
            # Day 366 on, or after the window for features it cuts short.
            offset = 366 + i if last == 365 else last + 1 + i
            stamp = datetime.combine(release + timedelta(days=offset), datetime.min.time(), timezone.utc)
        events.append({"repo": f"org/repo{i:03}", "feature": feature,
                       "first_use": stamp.strftime("%Y-%m-%dT%H:%M:%SZ"), "offset_days": offset})

json.dump({"adopters_at_365": WITHIN, "events": events}, sys.stdout, indent=1)
print()
