#!/usr/bin/env python3
"""Writes the bundled example dataset under data/.

The carbon intensity traces are synthetic: a seasonal + diurnal profile per
zone with AR(1) weather noise, scaled to roughly the annual means reported for
Spain, the Netherlands and Germany in 2022. They exist so the simulator can be
run end to end without network access; substitute real hourly exports (same
CSV layout) for any quantitative claim.
"""

import argparse
import datetime as dt
import math
import pathlib
import random

ZONES = {
    # zone: (annual mean gCO2/kWh, seasonal amplitude, solar dip depth, noise sd)
    "ES": (165.0, 0.18, 0.35, 0.15),
    "NL": (385.0, 0.10, 0.18, 0.24),
    "DE": (430.0, 0.14, 0.22, 0.28),
}


def ci_series(zone, start, hours, rng):
    mean, seasonal, solar, noise_sd = ZONES[zone]
    values = []
    noise = 0.0
    for h in range(hours):
        t = start + dt.timedelta(hours=h)
        doy = t.timetuple().tm_yday
        season = 1.0 + seasonal * math.cos(2.0 * math.pi * (doy - 15) / 365.0)
        # solar dip centred on 13:00 local-ish, stronger in summer
        summer = 0.5 * (1.0 - math.cos(2.0 * math.pi * (doy - 15) / 365.0))
        hour = t.hour + 1
        daylight = max(0.0, math.cos(math.pi * (hour - 13) / 12.0))
        diurnal = 1.0 - solar * (0.5 + 0.5 * summer) * daylight ** 2
        evening = 1.0 + 0.06 * math.exp(-((hour - 19) ** 2) / 4.0)
        noise = 0.92 * noise + rng.gauss(0.0, noise_sd * math.sqrt(1 - 0.92 ** 2))
        values.append(max(15.0, mean * season * diurnal * evening * (1.0 + noise)))
    return values


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(pathlib.Path(__file__).resolve().parent.parent / "data"))
    ap.add_argument("--seed", type=int, default=2022)
    args = ap.parse_args()

    out = pathlib.Path(args.out)
    (out / "traces").mkdir(parents=True, exist_ok=True)
    (out / "power").mkdir(parents=True, exist_ok=True)
    start = dt.datetime(2022, 1, 1)
    hours = 8760
    for zone in ZONES:
        rng = random.Random(f"{args.seed}-{zone}")
        values = ci_series(zone, start, hours, rng)
        with open(out / "traces" / f"{zone.lower()}_2022.csv", "w", newline="\n") as f:
            f.write("timestamp,zone,carbon_intensity_gco2_per_kwh\n")
            for h, v in enumerate(values):
                ts = (start + dt.timedelta(hours=h)).strftime("%Y-%m-%dT%H:%M:%SZ")
                f.write(f"{ts},{zone},{v:.1f}\n")

    # Two hours of 20 s meter readings per node for `rank --power-dir`.
    for node, (idle, peak) in {"de-node": (2000, 7000), "es-node": (2000, 7000), "nl-node": (2000, 7000)}.items():
        rng = random.Random(f"{args.seed}-{node}")
        with open(out / "power" / f"{node}.csv", "w", newline="\n") as f:
            f.write("timestamp,node_id,power_watts\n")
            for k in range(2 * 180):
                ts = (start + dt.timedelta(seconds=20 * k)).strftime("%Y-%m-%dT%H:%M:%SZ")
                u = 0.3 + 0.2 * math.sin(k / 30.0) + rng.uniform(-0.05, 0.05)
                f.write(f"{ts},{node},{idle + (peak - idle) * u:.1f}\n")


if __name__ == "__main__":
    main()
