# package for CLI
