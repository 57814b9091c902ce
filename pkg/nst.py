# nst.py: Command-line entry point of the stochastic-texture pipeline.
# Subcommands are plugins loaded from the `nst_tools` directory. `run(argv)`
# dispatches one subcommand and turns its outcome into an exit code:
# 0 on success, 1 for invalid input or usage, 2 for numerical failures.

import importlib
import inspect
import os
import sys
from typing import Dict, List, Optional

from colorama import Fore, Style, init

from errors import InputError, NstError, NumericalError
from logger import logger

PLUGIN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "nst_tools")

# Display order and grouping for the help listing.
PLUGIN_CATEGORIES = {
    "cmd_fbm.py": "fBm Modeling",
    "cmd_wavelet.py": "Self-Similarity",
    "cmd_rtv.py": "Decomposition",
    "cmd_features.py": "Features",
    "cmd_classify.py": "Classification",
    "cmd_pipeline.py": "Pipeline",
}
CATEGORY_ORDER = [
    "fBm Modeling",
    "Self-Similarity",
    "Decomposition",
    "Features",
    "Classification",
    "Pipeline",
    "Shell",
]


class NstCli:
    """Holds the command registry and output styles for one invocation."""

    def __init__(self):
        self.commands: Dict[str, dict] = {}
        self.style = {
            "title": Fore.CYAN + Style.BRIGHT,
            "category": Fore.GREEN,
            "error": Fore.RED + Style.BRIGHT,
            "status": Fore.YELLOW,
            "command": Fore.CYAN + Style.BRIGHT,
            "alias": Fore.YELLOW,
            "reset": Style.RESET_ALL,
        }
        self._load_commands()

    def _load_commands(self):
        self.register_command("help", self.cmd_help, ["h"], "Lists the available subcommands.", "Shell")

        if not os.path.isdir(PLUGIN_DIR):
            return
        for filename in sorted(os.listdir(PLUGIN_DIR)):
            if filename.startswith("cmd_") and filename.endswith(".py"):
                module_name = f"nst_tools.{filename[:-3]}"
                category = PLUGIN_CATEGORIES.get(filename, "Uncategorized")
                try:
                    module = importlib.import_module(module_name)
                    if hasattr(module, "register"):
                        for cmd_name, cmd_info in module.register().items():
                            self.register_command(
                                cmd_name,
                                cmd_info["func"],
                                cmd_info.get("alias", []),
                                cmd_info.get("help", ""),
                                category,
                            )
                except Exception as e:
                    logger.error("CLI", f"Failed to load commands from {filename}.", {"error": str(e)}, exc_info=True)
                    self.print_error(f"Failed to load commands from {filename}: {e}")

    def register_command(self, name, func, aliases, help_text, category="Uncategorized"):
        command_info = {"name": name, "func": func, "help": help_text, "aliases": aliases, "category": category}
        self.commands[name] = command_info
        for alias in aliases:
            self.commands[alias] = command_info

    def print_error(self, message: str):
        sys.stderr.write(f"{self.style['error']}Error:{Style.RESET_ALL} {message}\n")

    def cmd_help(self, args: List[str]) -> int:
        out = sys.stdout
        out.write(f"\n{self.style['title']}nst - stochastic texture pipeline{self.style['reset']}\n")

        categorized: Dict[str, List[dict]] = {}
        for name, info in self.commands.items():
            if name == info["name"]:
                categorized.setdefault(info["category"], []).append(info)

        width = max(len(info["name"]) for infos in categorized.values() for info in infos)
        for category in CATEGORY_ORDER + sorted(set(categorized) - set(CATEGORY_ORDER)):
            if category not in categorized:
                continue
            out.write(f"\n--- {self.style['category']}{category}{self.style['reset']} ---\n")
            for info in sorted(categorized[category], key=lambda x: x["name"]):
                aliases = f" ({', '.join(info['aliases'])})" if info["aliases"] else ""
                out.write(
                    f"  {self.style['command']}{info['name']:<{width}}{self.style['reset']}"
                    f"{self.style['alias']}{aliases}{self.style['reset']}"
                    f"  - {info['help'] or 'No description.'}\n"
                )
        out.write(
            f"\n{self.style['status']}Tip:{self.style['reset']} run "
            f"{self.style['command']}nst <command> --help{self.style['reset']} for the flags of one command.\n"
        )
        return 0

    def dispatch(self, argv: List[str]) -> int:
        if not argv:
            self.cmd_help([])
            return 1

        command_name, args = argv[0].lower(), list(argv[1:])
        command_info = self.commands.get(command_name)
        if not command_info:
            self.print_error(f"Unknown command '{argv[0]}'. Type 'help' for a list of commands.")
            return 1

        func = command_info["func"]
        if inspect.ismethod(func):
            return func(args)

        available = {"args": args, "style": self.style}
        kwargs = {k: v for k, v in available.items() if k in inspect.signature(func).parameters}

        logger.info("CLI", f"Running '{command_info['name']}'.", {"argv": argv})
        try:
            result = func(**kwargs)
        except SystemExit as e:
            return 0 if e.code in (0, None) else 1
        except InputError as e:
            logger.warning("CLI", f"'{command_info['name']}' rejected its input.", {"error": str(e)})
            self.print_error(str(e))
            return e.exit_code
        except NumericalError as e:
            logger.error("CLI", f"'{command_info['name']}' failed numerically.", {"error": str(e)}, exc_info=True)
            self.print_error(str(e))
            return e.exit_code
        except NstError as e:
            logger.error("CLI", f"'{command_info['name']}' failed.", {"error": str(e)}, exc_info=True)
            self.print_error(str(e))
            return e.exit_code
        except OSError as e:
            logger.warning("CLI", f"'{command_info['name']}' hit a file error.", {"error": str(e)})
            self.print_error(str(e))
            return 1
        except Exception as e:
            logger.error("CLI", f"'{command_info['name']}' crashed.", {"error": repr(e)}, exc_info=True)
            self.print_error(f"Internal error: {e!r}")
            return 2
        return int(result or 0)


def run(argv: Optional[List[str]] = None) -> int:
    return NstCli().dispatch(sys.argv[1:] if argv is None else list(argv))


def main():
    init(autoreset=True)
    sys.exit(run())


if __name__ == "__main__":
    main()
