# Numerical thresholds shared across modules.
EPS_ID = 1e-9        # relative residual for algebraic identities
EPS_INV = 1e-10      # singular values at or below this count as zero
EPS_SYM = 1e-10      # transpose symmetry of symmetric-model blocks
EPS_MARGIN = 1e-3    # keep distances this far below 2 before taking logs
EPS_BRANCH = 1e-6    # spectrum must stay this far from -1 for the principal log
EPS_STONE = 1e-6     # one-parameter group reconstruction
EPS_REC = 1e-8       # reconstruction of factorizations
FD_STEP = 1e-4       # central-difference step for derivatives
MAX_PHASE_JUMP = 0.5 * 3.141592653589793
