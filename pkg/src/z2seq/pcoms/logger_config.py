# SPDX-License-Identifier: Apache-2.0
# Standard
import logging


def setup_logger(name):
    # Library modules only fetch loggers; the CLI owns handler configuration
    logger = logging.getLogger(name)
    return logger
