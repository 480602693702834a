from . import constants, exceptions, files_and_folders, formatter
from . import response as Response
from . import validator
from .common import Common
from .enumerator import Enumerator
from .messages import Messages
from .parser import Parser
from .timer import log_runtime

__all__ = [
    "validator",
    "Common",
    "constants",
    "exceptions",
    "Enumerator",
    "files_and_folders",
    "formatter",
    "log_runtime",
    "Messages",
    "Parser",
    "Response",
]
