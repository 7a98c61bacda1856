from fastapi import FastAPI

from simulation_api.routes import router as simulation_router

app = FastAPI(title="Chain Simulation API", description="API for altruistic-donor chain matching experiments")

# Include simulation routes
app.include_router(simulation_router)

@app.get("/")
async def root():
    return {
        "message": "Chain Simulation API is running!",
        "endpoints": {
            "POST /simulate": "Run one experiment and return its aggregate statistics",
            "POST /walk": "Random-walk bounds, roots and Monte Carlo statistics",
            "POST /verify-lemmas": "Check the random-graph lemmas",
        }
    }

if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
