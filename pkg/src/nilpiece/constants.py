# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Constants used throughout the nilpiece codebase
"""

from __future__ import annotations

SCHEMA_TAG = "nilpiece/1"

MAX_FIELD_ORDER = 256

#: Default moduli, coefficient lists low-to-high.  These are the Conway
#: polynomials for the listed (p, k); prime fields without an entry use x.
DEFAULT_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
}

# Size guards.  All of them can be lifted with --force on the command line.
GROUP_MAX_DIM = 5
GROUP_MAX_ORDER = 4
FILTRATION_ENUM_MAX_DIM = 7
CENSUS_MAX_ORDER = {1: 16, 2: 2}
# orders admitted beyond CENSUS_MAX_ORDER; their forms are streamed per partition
CENSUS_STREAMED_ORDERS = {2: (4,)}
SM_COUNT_MAX_N = 2
SM_COUNT_MAX_ORDER = 4
SPRINGER_MAX_RANK = 2
FIBER_MAX_N = 2
UNIVERSALITY_ORDERS = (2, 3, 4, 5)
