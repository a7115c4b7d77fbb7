# -*- coding: utf-8 -*-
from kamodo_phasespace.runs.PhaseSpaceRuns import main

main()
