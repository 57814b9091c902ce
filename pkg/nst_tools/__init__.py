# nst_tools: subcommand plugins for nst.py. Every cmd_*.py module exposes
# register() -> {name: {"func", "alias", "help"}}.
