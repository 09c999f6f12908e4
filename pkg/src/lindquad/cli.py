# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Dispatch a job config to the job running it."""

import logging
from typing import Final

from . import APP_NAME
from .config import JobConfig
from .errors import ConfigError
from .jobs.base import Job
from .jobs.ep_scan import EPScanJob
from .jobs.evolve import EvolveJob
from .jobs.spectrum import SpectrumJob
from .jobs.speed import SpeedJob
from .jobs.steady_state import SteadyStateJob
from .jobs.validate import ValidateJob

logger = logging.getLogger(__name__)

JOBS: Final[dict[str, type[Job]]] = {
    job.name: job for job in (SpectrumJob, SteadyStateJob, EvolveJob, SpeedJob, EPScanJob, ValidateJob)
}


def run(config: JobConfig) -> int:
    """Run a job and write its results.

    Args:
        config: The job to run.

    Returns:
        The exit status, errors are left to the caller.
    """

    if config.command not in JOBS:
        raise ConfigError(f"Unknown command '{config.command}', expected one of {list(JOBS)}")

    logger.info(f"Starting the {config.command} job of {APP_NAME}!")
    logger.info(f"Writing the results to '{config.output_directory}'")

    status = JOBS[config.command](config).run()

    logger.info(f"The {config.command} job finished")

    return status
