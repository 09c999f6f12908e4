# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.

"""Run the property suites of every numerical module."""

import logging

from ..errors import InvariantViolation
from ..export import Table
from ..sampling import make_rng
from ..validation import run_suites
from .base import Job

logger = logging.getLogger(__name__)


class ValidateJob(Job):
    """Writes every check to `validate.csv`, failing when any of them fails."""

    name = "validate"

    def run(self) -> int:
        logger.info(f"Validating with seed {self.config.seed} and {self.config.samples} sample(s)")

        checks = run_suites(make_rng(self.config.seed), self.config.samples)
        table = Table(("suite", "name", "residual", "tolerance", "passed"), [tuple(check) for check in checks])
        self.write_table("validate.csv", table)

        failed = [check for check in checks if not check.passed]
        for check in failed:
            logger.error(f"[{check.suite}] {check.name}: residual {check.residual:.3e} > {check.tolerance:.3e}")

        logger.info(f"{len(checks) - len(failed)}/{len(checks)} check(s) passed")

        if failed:
            raise InvariantViolation(f"{len(failed)} of {len(checks)} check(s) failed")

        return 0
