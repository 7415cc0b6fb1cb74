pytest_plugins = ["integration.plugin"]
