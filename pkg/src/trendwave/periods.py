"""Reference growth periods and reference wave tables for weekly EUR/USD.

Weeks are numbered from 1 (2001-10-07). These are shipped as defaults and
fixtures; nothing in the pipeline derives them.
"""
from __future__ import annotations

from dataclasses import dataclass

FIRST_WEEK_DATE = "2001-10-07"


@dataclass(frozen=True)
class Period:
    label: str
    start: int
    end: int

    def __str__(self):
        return f"{self.start}:{self.end}"


DEFAULT_PERIODS = (
    Period("I", 1, 196),
    Period("II", 216, 361),
    Period("III", 387, 428),
    Period("IV", 452, 518),
    Period("V", 564, 667),
    Period("VI", 793, 865),
    Period("VII", 971, 1029),
    Period("VIII", 1095, 1140),
)

REFERENCE_R2 = {
    "I": 0.991761, "II": 0.988207, "III": 0.957631, "IV": 0.943458,
    "V": 0.956426, "VI": 0.992061, "VII": 0.955061, "VIII": 0.976349,
}

# (a, b, y_sat, ratio) per wave, in reference order
REFERENCE_WAVES = {
    "I": [
        (15.43, 20.5, -9.39, -0.00742),
        (3.64, 39, 0.96, 0.00169),
        (2.88, 68, 0.68, 0.000868),
        (3.43, 86, 1.6, 0.00136),
        (6.61, 119, 3.65, 0.00116),
        (6.75, 132, -1.41, -0.000396),
        (2.66, 154, -0.72, -0.000439),
        (26.82, 173, 32.72, 0.00176),
        (3.14, 194, -0.95, -0.00039),
    ],
    "II": [
        (12.83, 219, -5.87, -0.0191),
        (2.16, 233, -0.253, -0.00146),
        (2.43, 239, 0.347, 0.001373),
        (2.38, 261, -0.322, -0.0007),
        (0.828, 268, 0.0648, 0.000356),
        (1.83, 288, 0.197, 0.000359),
        (2.36, 318, 0.359, 0.000362),
        (4.09, 329, -0.721, -0.00038),
        (1.46, 337, 0.256, 0.000354),
        (15.06, 344, 15.33, 0.00194),
        (1.52, 353, 0.303, 0.000356),
        (1.4, 360, -0.28, -0.00034),
    ],
    "III": [
        (6, 387, -1.8, -0.025),
        (1, 390, 0.16, 0.00667),
        (1.3, 394, -0.3, -0.00577),
        (2.7, 398, 0.7, 0.00463),
        (1, 408, 0.1, 0.00104),
        (1.2, 414, 0.1, 0.000694),
        (1.1, 419, 0.11, 0.000714),
        (4.6, 420, 1.57, 0.00237),
        (1.4, 425, 0.3, 0.00131),
    ],
    "IV": [
        (1.8, 459, 0.58, 0.00895),
        (3.06, 463, -1.32, -0.00829),
        (5.99, 470, 3.83, 0.00799),
        (4.47, 481, -2.18, -0.00393),
        (1.13, 496, 0.079, 0.000380),
        (20.56, 500, 31.08, 0.00756),
        (1.89, 514, 0.32, 0.000661),
    ],
    "V": [
        (2.78, 566, -0.95, -0.0285),
        (3, 572, 0.35, 0.00324),
        (2, 579, -0.3, -0.00234),
        (2.1, 590, 0.4, 0.00176),
        (1.1, 599, -0.14, -0.000884),
        (1.3, 601, 0.07, 0.000354),
        (1.2, 606, -0.15, -0.000727),
        (1.1, 610, 0.13, 0.000629),
        (1, 613, -0.16, -0.0008),
        (1.1, 619, 0.06, 0.000244),
        (1.2, 622, -0.09, -0.000318),
        (1.3, 628, 0.17, 0.000503),
        (1, 631, -0.13, -0.000478),
        (1.7, 636, 0.09, 0.000181),
        (1.3, 642, -0.11, -0.000267),
        (1.1, 649, 0.08, 0.000211),
        (12.9, 649, 3.88, 0.000874),
        (1, 651, -0.07, -0.000199),
        (1.1, 654, 0.07, 0.000175),
    ],
    "VI": [
        (12, 794, -4, -0.0417),
        (1.4, 799, 0.17, 0.00434),
        (1.1, 802, -0.05, -0.00114),
        (1, 806, 0.06, 0.00107),
        (1.1, 809, -0.1, -0.00134),
        (1, 816, 0.05, 0.000521),
        (1.1, 819, -0.06, -0.000505),
        (2.8, 828, 0.35, 0.000868),
        (1.4, 839, -0.22, -0.000836),
        (1, 842, 0.04, 0.0002),
        (1, 844.5, -0.14, -0.000667),
        (15, 849, 6, 0.00175),
        (2, 852.5, 0.24, 0.000496),
        (1.7, 861, 0.24, 0.000512),
    ],
    "VII": [
        (4, 971, -0.7, -0.0146),
        (1.1, 974, 0.09, 0.00341),
        (1.2, 977, -0.07, -0.00162),
        (2.5, 985, 0.3, 0.00176),
        (1, 989, -0.06, -0.000714),
        (1.6, 995, -0.15, -0.000868),
        (9, 1005, 3, 0.00225),
        (1.5, 1017, -0.15, -0.00051),
        (2.7, 1024, 0.58, 0.000959),
    ],
    "VIII": [
        (3, 1097, -0.7, -0.0194),
        (1.07, 1102, 0.07, 0.00204),
        (3.79, 1111, 0.58, 0.00225),
        (2, 1116, -0.2, -0.00114),
        (1.9, 1125, 0.33, 0.0014),
        (1.9, 1128, -0.2, -0.000774),
        (17, 1133, 5.04, 0.0019),
        (2.1, 1136, 0.3, 0.00085),
    ],
}


def period_by_label(label: str) -> Period:
    for p in DEFAULT_PERIODS:
        if p.label == label:
            return p
    raise KeyError(label)
