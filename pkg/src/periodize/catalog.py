"""Identifiers of every equation the package knows about."""

# complex ODEs integrated in real time
COMPLEX_ODES = {
    "1.1": 1,
    "1.5": 2, "1.6": 2, "1.7": 2, "1.8": 2,
    "1.13": 2, "1.14a": 2, "1.14b": 2, "1.15": 2,
    "1.20": 2, "1.21": 2, "1.22": 2, "1.23": 2,
    "1.24": 2, "1.25": 2, "1.26": 2,
    "1.29": 3, "1.30": 3, "1.31": 3, "1.32": 3,
    "3.44": 3, "3.45": 2,
}

# real avatars: id -> (order, number of real components)
REAL_ODES = {
    "1.2": (1, 2), "1.3": (1, 2), "1.4": (2, 1),
    "1.9": (2, 2), "1.10": (2, 2), "1.11": (2, 2), "1.12": (2, 2),
    "1.16": (2, 2), "1.17": (2, 2), "1.18": (2, 2), "1.19": (2, 2),
    "1.27": (2, 2),
    "1.33": (3, 2), "1.34": (3, 2),
}

# base equations in the complex variable tau
BASE_ODES = {"2.5": 1, "3.1": 2, "3.5": 2, "3.7": 2, "3.13": 2, "3.18": 2, "3.31": 2}

PDES = {
    "1.35", "1.36", "1.37", "1.38", "1.39", "1.40", "1.41", "1.42", "1.43", "1.44",
    "1.45", "1.46", "2.22", "2.38", "2.45", "3.46", "3.49",
}

KNOWN_IDS = frozenset(COMPLEX_ODES) | frozenset(REAL_ODES) | frozenset(BASE_ODES) | frozenset(PDES)
