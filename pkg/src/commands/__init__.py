from src.commands.matrix import cmd_matrix
from src.commands.dispersion import cmd_dispersion
from src.commands.kernel import cmd_kernel
from src.commands.limit import cmd_limit
from src.commands.evolve import cmd_evolve

COMMANDS = {
    "matrix": cmd_matrix,
    "dispersion": cmd_dispersion,
    "kernel": cmd_kernel,
    "limit": cmd_limit,
    "evolve": cmd_evolve,
}
