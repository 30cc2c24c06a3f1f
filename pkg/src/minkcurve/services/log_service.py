from minkcurve.core import config
import datetime
import json
import logging
import uuid
import sys

logger = logging.getLogger("minkcurve")
if not logger.handlers:
    logger.setLevel(config.MINK_LOG_LEVEL)
    _stream = logging.StreamHandler(sys.stderr)
    _stream.setFormatter(logging.Formatter("%(message)s"))
    logger.addHandler(_stream)
    if config.MINK_LOG_PATH:
        logger.addHandler(logging.FileHandler(config.MINK_LOG_PATH))
    logger.propagate = False

class LogService:
    @staticmethod
    def _emit(event: dict, level: int = logging.INFO):
        try:
            logger.log(level, json.dumps(event, sort_keys=True, default=str))
        except Exception as e:
            # Fallback logging so we don't crash the run
            print(f"FAILED TO LOG EVENT: {e}", file=sys.stderr)

    @staticmethod
    def _base(action_type: str, run_id: str) -> dict:
        return {
            "event_id": str(uuid.uuid4()),
            "run_id": run_id,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "action_type": action_type,
        }

    @staticmethod
    def log_run_event(command: str, config: dict, status: str, run_id: str, summary: dict = None):
        """
        Logs the start or end of a CLI command.
        """
        event = LogService._base(f"run_{command}", run_id)
        event.update({"config": config, "status": status, "summary": summary or {}})
        LogService._emit(event)

    @staticmethod
    def log_check_event(check: str, passed: bool, details: dict, run_id: str):
        """
        Logs the outcome of a hypothesis or lemma check.
        """
        event = LogService._base(f"check_{check}", run_id)
        event.update({"passed": passed, "details": details})
        LogService._emit(event, logging.INFO if passed else logging.WARNING)

    @staticmethod
    def log_solver_event(iteration: int, area: float, grad_bound: float, residual: float,
                         step: float, run_id: str):
        """
        Logs one accepted damped-Newton step.
        """
        event = LogService._base("solver_step", run_id)
        event.update({
            "iteration": iteration,
            "area": area,
            "grad_bound": grad_bound,
            "residual": residual,
            "step": step,
        })
        LogService._emit(event, logging.DEBUG)

    @staticmethod
    def log_error(context: str, error_message: str, run_id: str):
        """
        Generic error logger.
        """
        event = LogService._base("ERROR", run_id)
        event.update({"context": context, "error_message": error_message})
        LogService._emit(event, logging.ERROR)
