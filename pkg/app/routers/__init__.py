# ABOUTME: Initialize routers package
# ABOUTME: Each module registers one command of the harness command line
