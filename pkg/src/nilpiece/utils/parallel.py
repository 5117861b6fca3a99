# GNU General Public License v3.0+ (see LICENSES/GPL-3.0-or-later.txt or
# https://www.gnu.org/licenses/gpl-3.0.txt)
# SPDX-License-Identifier: GPL-3.0-or-later
# SPDX-FileCopyrightText: The nilpiece authors

"""
Run independent partitions of an enumeration on a bounded pool.
"""

from __future__ import annotations

import asyncio
from collections.abc import Callable, Sequence
from typing import TypeVar

import asyncio_pool  # type: ignore[import]
from antsibull_core import app_context
from antsibull_core.logging import get_module_logger

mlog = get_module_logger(__name__)

ItemT = TypeVar("ItemT")
ResultT = TypeVar("ResultT")


def partition(items: Sequence[ItemT], parts: int) -> list[list[ItemT]]:
    """
    Deal ``items`` round robin into at most ``parts`` non-empty lists.
    """
    parts = max(1, min(parts, len(items)))
    return [list(items[i::parts]) for i in range(parts)]


async def _run_all(
    func: Callable[[ItemT], ResultT], partitions: Sequence[ItemT], jobs: int
) -> list[ResultT]:
    async with asyncio_pool.AioPool(size=jobs) as pool:
        requestors = [
            await pool.spawn(asyncio.to_thread(func, part)) for part in partitions
        ]
        values = await asyncio.gather(*requestors)
    return list(values)


def resolve_jobs(jobs: int | None) -> int:
    """``jobs``, or the library context's ``thread_max`` when it is ``None``."""
    if jobs is None:
        return app_context.lib_ctx.get().thread_max
    return max(jobs, 1)


def run_partitions(
    func: Callable[[ItemT], ResultT],
    partitions: Sequence[ItemT],
    jobs: int | None = None,
) -> list[ResultT]:
    """
    Apply ``func`` to every partition and return the results in partition
    order.  ``jobs`` defaults to the library context's ``thread_max``.
    """
    jobs = resolve_jobs(jobs)
    flog = mlog.fields(func="run_partitions")
    flog.fields(partitions=len(partitions), jobs=jobs).debug("Running partitions")
    if jobs <= 1 or len(partitions) <= 1:
        return [func(part) for part in partitions]
    return asyncio.run(_run_all(func, partitions, jobs))
