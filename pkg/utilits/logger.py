"""
@brief Centralized logger configuration for the fair-division toolkit.
Provides unified logging functionality with daily file handlers.
"""

import logging
import os
from datetime import datetime
from typing import Dict, Optional

from config.enums import Defaults


class AnalysisLogger:
    """
    @brief Logger factory for library modules and command analyzers.
    Handles creation of the log directory, log files, and format configuration.
    """

    FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

    def __init__(self, log_directory: Optional[str] = None):
        """
        @brief Initialize the logger factory.
        @param log_directory Directory for daily log files; None reads
               FAIRDIV_LOG_DIR (default "logs"), "-" disables file output.
        """
        if log_directory is None:
            log_directory = os.environ.get(Defaults.LOG_DIR_ENV, Defaults.LOG_DIR)
        self.log_directory = None if log_directory == "-" else log_directory
        self._loggers: Dict[str, logging.Logger] = {}
        self._configure_root_logger()

    def _ensure_directory(self) -> bool:
        """
        @brief Create the log directory if it doesn't exist.
        @return True when file logging is possible.
        """
        if self.log_directory is None:
            return False
        try:
            os.makedirs(self.log_directory, exist_ok=True)
            return True
        except OSError as error:
            logging.getLogger(__name__).warning(f"Cannot create directory: {error}")
            return False

    def _configure_root_logger(self):
        """
        @brief Configure the root logger with a standard format and INFO level.
        Called once on initialization; basicConfig is a no-op when handlers exist.
        """
        logging.basicConfig(
            level=logging.INFO,
            format=self.FORMAT,
            datefmt="%Y-%m-%d %H:%M:%S"
        )

    def get_logger(self, name: str) -> logging.Logger:
        """
        @brief Return a dedicated logger for a module or analyzer.
        File handlers are attached on first request only.
        @param name Logical name of the module.
        @return Configured logging.Logger instance.
        """
        if name in self._loggers:
            return self._loggers[name]

        logger = logging.getLogger(name)
        logger.setLevel(logging.INFO)

        # Remove old handlers
        for handler in logger.handlers[:]:
            logger.removeHandler(handler)

        if self._ensure_directory():
            log_filename = f"{name.lower()}_{datetime.now().strftime('%Y%m%d')}.log"
            log_path = os.path.join(self.log_directory, log_filename)
            try:
                file_handler = logging.FileHandler(log_path, encoding="utf-8", delay=True)
                file_handler.setLevel(logging.INFO)
                file_handler.setFormatter(logging.Formatter(self.FORMAT))
                logger.addHandler(file_handler)
            except OSError as error:
                logging.getLogger(__name__).warning(f"Cannot create file handler: {error}")

        self._loggers[name] = logger
        return logger


# Global logger instance
analysis_logger = AnalysisLogger()
