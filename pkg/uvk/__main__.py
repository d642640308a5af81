from uvk.cli import cli

cli(prog_name="uvk")
