from routes.simulations import router as simulator_router
