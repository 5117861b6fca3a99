# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Classify nilpotent coadjoint elements of odd orthogonal Lie algebras over
small finite fields into nilpotent pieces
"""

from __future__ import annotations

__version__ = "0.1.0.post0"
