import asyncio
import logging
import os
from concurrent.futures import Executor, ProcessPoolExecutor, \
    ThreadPoolExecutor
from typing import Any, Callable, List, Optional, Sequence

loop = asyncio.new_event_loop()

WORKERS = int(os.getenv('BATTROM_WORKERS', '1'))
assert WORKERS >= 1


def _executor(workers: int) -> Executor:
    if workers > 1:
        return ProcessPoolExecutor(max_workers=workers)
    return ThreadPoolExecutor(max_workers=1)


async def _run_all(fn: Callable, jobs: Sequence[tuple],
                   workers: int) -> List[Any]:
    with _executor(workers) as executor:
        futures = [loop.run_in_executor(executor, fn, *args)
                   for args in jobs]
        return await asyncio.gather(*futures)


def run_parallel(fn: Callable, jobs: Sequence[tuple],
                 workers: Optional[int] = None) -> List[Any]:
    """Runs fn(*args) for every job; results keep the job order."""
    workers = WORKERS if workers is None else workers
    logging.debug(f'{len(jobs)} job(s) on {workers} worker(s)')
    if not jobs:
        return []
    return loop.run_until_complete(_run_all(fn, jobs, workers))


def close():
    """Finishes async generators and closes the shared loop; called once
    when the command line exits."""
    if loop.is_closed():
        return
    loop.run_until_complete(loop.shutdown_asyncgens())
    loop.close()
    logging.debug('worker loop closed')
