# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

import pytest
from antsibull_core import app_context

from nilpiece.utils.parallel import partition, resolve_jobs, run_partitions


@pytest.mark.parametrize(
    "items, parts, expected",
    [
        pytest.param(list(range(7)), 3, [[0, 3, 6], [1, 4], [2, 5]], id="round-robin"),
        pytest.param([1, 2], 5, [[1], [2]], id="more-parts-than-items"),
        pytest.param([1, 2, 3], 0, [[1, 2, 3]], id="zero-parts"),
        pytest.param([], 4, [[]], id="empty"),
    ],
)
def test_partition(items, parts, expected):
    assert partition(items, parts) == expected


def test_resolve_jobs():
    assert resolve_jobs(3) == 3
    assert resolve_jobs(0) == 1
    assert resolve_jobs(None) == app_context.lib_ctx.get().thread_max


@pytest.mark.parametrize("jobs", [1, 2, 4])
def test_run_partitions_keeps_order(jobs: int):
    parts = partition(list(range(20)), 4)
    assert run_partitions(sum, parts, jobs=jobs) == [sum(part) for part in parts]


def test_run_partitions_empty():
    assert run_partitions(len, [], jobs=2) == []
