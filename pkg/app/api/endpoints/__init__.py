# API endpoints