from mfc_engine.api.commands import cmd_benchmark, cmd_eval, cmd_export_curves, cmd_train
from mfc_engine.api.mfc_interface import MfcInterface
