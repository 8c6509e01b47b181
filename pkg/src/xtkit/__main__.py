from xtkit.cli import run

run()
