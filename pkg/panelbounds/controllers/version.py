from panelbounds.controllers.abstract_controller import AbstractController,\
    VERSION_NUMBER


class Version(AbstractController):

    VERSION_DESCRIPTION = 'beta'

    def index(self, config):
        """Return the version and its description."""
        return {
            'version': VERSION_NUMBER,
            'description': self.VERSION_DESCRIPTION,
        }
