"""run the fastapi server"""

import logging

import uvicorn
from xychain.config import configure_logging, get_settings

if __name__ == "__main__":
    settings = get_settings()
    configure_logging()
    logger = logging.getLogger("xychain.server")

    logger.info("starting %s v%s", settings.api_title, settings.api_version)
    logger.info("server running at http://%s:%s", settings.host, settings.port)
    logger.info("api docs available at http://%s:%s/docs", settings.host, settings.port)

    uvicorn.run(
        "xychain.main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.reload
    )
