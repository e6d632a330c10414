import logging
import sys

LOG_FORMAT = "%(levelname)s: %(name)s: %(message)s"


def configure_logging(verbosity: int = 0) -> None:
	"""Route library loggers to stderr; stdout is reserved for reports."""
	if verbosity >= 2:
		level = logging.DEBUG
	elif verbosity == 1:
		level = logging.INFO
	else:
		level = logging.WARNING

	handler = logging.StreamHandler(sys.stderr)
	handler.setFormatter(logging.Formatter(LOG_FORMAT))

	root = logging.getLogger("markov")
	root.handlers[:] = [handler]
	root.setLevel(level)
	root.propagate = False
