from hvmax import config  # NOQA
from hvmax import data  # NOQA
from hvmax import exceptions  # NOQA
from hvmax import gradcheck  # NOQA
from hvmax import logging  # NOQA
from hvmax import net  # NOQA
from hvmax import objectives  # NOQA
from hvmax import optim  # NOQA
from hvmax import pareto  # NOQA
from hvmax import scalarize  # NOQA
from hvmax import stats  # NOQA
from hvmax import structs  # NOQA
from hvmax import version  # NOQA

from hvmax.optim import paired_run  # NOQA
from hvmax.optim import run  # NOQA
from hvmax.scalarize import hv_weights  # NOQA
from hvmax.scalarize import log_hypervolume  # NOQA
from hvmax.scalarize import log_hypervolume_mu  # NOQA
from hvmax.structs import NadirSchedule  # NOQA
from hvmax.structs import Objective  # NOQA
from hvmax.structs import TrainConfig  # NOQA
from hvmax.version import __version__  # NOQA
