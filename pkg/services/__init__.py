# Pricing, dynamics and simulation services
