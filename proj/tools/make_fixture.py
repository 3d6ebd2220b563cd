#!/usr/bin/env python3
"""Regenerates data/sample_accidents_1k.csv, the bundled synthetic sample.

The file mimics the US-Accidents CSV schema (47 columns, header spellings of
the published dataset) at a size that keeps tests fast. Severity is driven by
the weather variables so models trained on the sample find real signal.
Deterministic: rerunning this script reproduces the committed file byte for
byte.
"""

import math
import os
import random

N_ROWS = 1000
SEED = 20160208

HEADER = [
    "ID", "Severity", "Start_Time", "End_Time", "Start_Lat", "Start_Lng", "End_Lat", "End_Lng",
    "Distance(mi)", "Description", "Number", "Street", "Side", "City", "County", "State",
    "Zipcode", "Country", "Timezone", "Airport_Code", "Weather_Timestamp", "Temperature(F)",
    "Wind_Chill(F)", "Humidity(%)", "Pressure(in)", "Visibility(mi)", "Wind_Direction",
    "Wind_Speed(mph)", "Precipitation(in)", "Weather_Condition", "Amenity", "Bump", "Crossing",
    "Give_Way", "Junction", "No_Exit", "Railway", "Roundabout", "Station", "Stop",
    "Traffic_Calming", "Traffic_Signal", "Turning_Loop", "Sunrise_Sunset", "Civil_Twilight",
    "Nautical_Twilight", "Astronomical_Twilight",
]

STATES = (["CA"] * 30 + ["TX"] * 12 + ["FL"] * 10 + ["NY"] * 8 + ["WA"] * 6 + ["OR"] * 5 +
          ["AZ"] * 5 + ["NV"] * 4 + ["CO"] * 4 + ["IL"] * 4 + ["OH"] * 4 + ["GA"] * 3 +
          ["NC"] * 2 + ["PA"] * 2 + ["MI"] * 1)

TIMEZONE = {
    "CA": "US/Pacific", "WA": "US/Pacific", "OR": "US/Pacific", "NV": "US/Pacific",
    "AZ": "US/Mountain", "CO": "US/Mountain",
    "TX": "US/Central", "IL": "US/Central",
    "FL": "US/Eastern", "NY": "US/Eastern", "OH": "US/Eastern", "GA": "US/Eastern",
    "NC": "US/Eastern", "PA": "US/Eastern", "MI": "US/Eastern",
}

COUNTIES = {
    "CA": ["Los Angeles", "San Diego", "Orange", "Riverside", "Alameda", "Sacramento"],
    "TX": ["Harris", "Dallas", "Bexar", "Travis"],
    "FL": ["Miami-Dade", "Broward", "Orange", "Hillsborough"],
    "NY": ["Kings", "Queens", "Suffolk", "Erie"],
}

WIND_DIRECTIONS = ["Calm", "CALM", "North", "N", "South", "S", "East", "E", "West", "W",
                   "Variable", "VAR", "NE", "NW", "SE", "SW"]

MONTH_DAYS = [31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31]


def pick_weather(rng):
    """(condition string, kind) where kind drives precipitation/visibility."""
    roll = rng.random()
    if roll < 0.40:
        return rng.choice(["Fair", "Clear", "Fair / Windy"]), "clear"
    if roll < 0.68:
        return rng.choice(["Partly Cloudy", "Mostly Cloudy", "Cloudy", "Overcast"]), "cloud"
    if roll < 0.80:
        return rng.choice(["Light Rain", "Rain", "Rain Shower", "Light Drizzle"]), "rain"
    if roll < 0.85:
        return rng.choice(["Heavy Rain", "Thunderstorm", "Heavy T-Storm"]), "heavy_rain"
    if roll < 0.90:
        return rng.choice(["Light Snow", "Snow", "Sleet", "Wintry Mix"]), "snow"
    if roll < 0.92:
        return rng.choice(["Heavy Snow", "Blowing Snow"]), "heavy_snow"
    if roll < 0.98:
        return rng.choice(["Fog", "Haze", "Mist", "Shallow Fog"]), "fog"
    return "Smoke", "other"


def main():
    rng = random.Random(SEED)
    rows = []
    for i in range(N_ROWS):
        state = rng.choice(STATES)
        county = rng.choice(COUNTIES.get(state, [f"{state} County {k}" for k in range(1, 5)]))

        year = rng.randint(2016, 2022)
        month = rng.randint(1, 12)
        day = rng.randint(1, MONTH_DAYS[month - 1])
        hour = rng.randint(0, 23)
        minute = rng.randint(0, 59)
        second = rng.randint(0, 59)
        start_time = f"{year:04d}-{month:02d}-{day:02d} {hour:02d}:{minute:02d}:{second:02d}"
        dur = rng.randint(30, 180)
        end_minute = (minute + dur) % 60
        end_hour = (hour + (minute + dur) // 60) % 24
        end_time = f"{year:04d}-{month:02d}-{day:02d} {end_hour:02d}:{end_minute:02d}:{second:02d}"

        condition, kind = pick_weather(rng)
        temp = min(105.0, max(5.0, rng.gauss(65 - (12 if kind in ("snow", "heavy_snow") else 0), 15)))
        humidity = min(100, max(10, int(rng.gauss(60 + (18 if "rain" in kind else 0), 16))))
        pressure = min(30.8, max(28.8, rng.gauss(29.9 - (0.22 if "heavy" in kind else 0.0), 0.22)))
        wind_speed = min(45.0, max(0.0, rng.gauss(8 + (6 if "heavy" in kind else 0), 6)))
        if kind == "fog":
            visibility = max(0.25, min(10.0, rng.gauss(2.5, 1.5)))
        elif "heavy" in kind:
            visibility = max(0.5, min(10.0, rng.gauss(5.0, 2.0)))
        else:
            visibility = max(1.0, min(10.0, rng.gauss(9.3, 1.1)))
        if kind in ("rain", "heavy_rain"):
            precipitation = round(abs(rng.gauss(0.08 if kind == "rain" else 0.4, 0.12)), 2)
        elif kind in ("snow", "heavy_snow"):
            precipitation = round(abs(rng.gauss(0.05, 0.06)), 2)
        else:
            precipitation = 0.0
        wind_chill = temp - (0.7 * wind_speed if temp < 50 else 0.12 * wind_speed)

        is_clear = kind == "clear"
        is_cloud = kind == "cloud"
        z = (-2.05 + 0.070 * (wind_speed - 8.0) - 1.9 * (pressure - 29.9) + 0.014 * (humidity - 60)
             - 0.10 * (visibility - 9.0) - 0.55 * is_clear + 0.35 * is_cloud)
        p_severe = 1.0 / (1.0 + math.exp(-z))
        if rng.random() < 0.02:
            severity = 1
        elif rng.random() < p_severe:
            severity = 3 if rng.random() < 0.75 else 4
        else:
            severity = 2

        daytime = 7 <= hour < 19
        civil = 6 <= hour < 20
        nautical = 5 <= hour < 21
        astro = 5 <= hour < 22

        def b(p):
            return "True" if rng.random() < p else "False"

        lat = round(rng.uniform(25.5, 48.5), 6)
        lng = round(rng.uniform(-124.0, -70.5), 6)
        description = rng.choice([
            f"Accident on I-{rng.randint(4, 95)} {rng.choice(['Northbound', 'Southbound', 'Eastbound', 'Westbound'])}.",
            f"Accident on US-{rng.randint(1, 101)}, lane blocked.",
            f"Incident at Exit {rng.randint(1, 60)}.",
            f"Accident on {rng.choice(['Main St', 'Oak Ave', '1st St', 'Sunset Blvd'])}, right lane closed.",
        ])

        def miss(value, rate):
            if rng.random() < rate:
                return "" if rng.random() < 0.8 else "NA"
            return value

        twilight_missing = rng.random() < 0.003
        row = [
            f"A-{i + 1}",
            str(severity),
            start_time,
            end_time,
            f"{lat:.6f}",
            f"{lng:.6f}",
            miss(f"{lat + rng.uniform(-0.05, 0.05):.6f}", 0.40),
            miss(f"{lng + rng.uniform(-0.05, 0.05):.6f}", 0.40),
            f"{abs(rng.gauss(0.4, 0.6)):.3f}",
            description,
            miss(str(rng.randint(1, 9999)), 0.55),
            rng.choice(["Main St", "Oak Ave", "I-5 N", "I-10 W", "Route 9", "Broadway"]),
            rng.choice(["R", "L"]),
            f"City{rng.randint(1, 120)}",
            county,
            state,
            f"{rng.randint(10000, 99610)}",
            "US",
            miss(TIMEZONE[state], 0.004),
            "K" + "".join(rng.choice("ABCDEFGHIJKLMNOPQRSTUVWXYZ") for _ in range(3)),
            miss(start_time, 0.02),
            miss(f"{temp:.1f}", 0.024),
            miss(f"{wind_chill:.1f}", 0.165),
            miss(str(humidity), 0.026),
            miss(f"{pressure:.2f}", 0.021),
            miss(f"{visibility:.1f}", 0.025),
            miss(rng.choice(WIND_DIRECTIONS), 0.026),
            miss(f"{wind_speed:.1f}", 0.055),
            miss(f"{precipitation:.2f}", 0.193),
            miss(condition, 0.04),
            b(0.012),            # Amenity
            b(0.004),            # Bump
            b(0.08),             # Crossing
            b(0.01),             # Give_Way
            b(0.07),             # Junction
            b(0.006),            # No_Exit
            b(0.012),            # Railway
            "False",             # Roundabout (constant, mirrors the source data)
            b(0.03),             # Station
            b(0.03),             # Stop
            b(0.004),            # Traffic_Calming
            b(0.15),             # Traffic_Signal
            "False",             # Turning_Loop
            "" if twilight_missing else ("Day" if daytime else "Night"),
            "" if twilight_missing else ("Day" if civil else "Night"),
            "" if twilight_missing else ("Day" if nautical else "Night"),
            "" if twilight_missing else ("Day" if astro else "Night"),
        ]
        rows.append(row)

    out_path = os.path.join(os.path.dirname(__file__), "..", "data", "sample_accidents_1k.csv")
    with open(out_path, "w", newline="") as f:
        def field(value):
            if any(c in value for c in ',"\n'):
                return '"' + value.replace('"', '""') + '"'
            return value

        f.write(",".join(HEADER) + "\n")
        for row in rows:
            f.write(",".join(field(v) for v in row) + "\n")
    print(f"wrote {out_path} ({len(rows)} rows)")


if __name__ == "__main__":
    main()
