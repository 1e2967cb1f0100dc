"""Mixed-state geometric phases: Uhlmann holonomy and the interferometric phase."""
