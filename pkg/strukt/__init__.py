from . import core
from . import mphelper
from . import generators
from . import embedding
from . import admissibility
from . import cliquesum
from . import patterns
from . import certcheck
from . import commands
from . import cli
