from src.cli.commands import cmd_check, cmd_export, cmd_predict, cmd_train
from src.cli.config import RunConfig

__all__ = ["RunConfig", "cmd_train", "cmd_predict", "cmd_check", "cmd_export"]
