"""Workflow-driven submission service for a digital object repository.

Subpackages:

* ``pubflow.procdef``    -- process archives, definition XML, soundness analysis
* ``pubflow.engine``     -- versioned deployments, instances, tokens, task lists
* ``pubflow.repository`` -- PID-addressed objects, versioned datastreams, search
* ``pubflow.service``    -- HTTP facade, sessions, staging uploads
* ``pubflow.client``     -- minimal stub client and the ``pubflow`` CLI
"""

__version__ = "0.1.0"
