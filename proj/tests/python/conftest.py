import os
import sys

# When running from the build tree, AVPODE_MODULE_DIR points at the directory
# holding the freshly built extension module.
_module_dir = os.environ.get("AVPODE_MODULE_DIR")
if _module_dir:
    sys.path.insert(0, _module_dir)
