void reset_device(struct device *dev)
{
    if (dev->ops && dev->ops->reset)
        dev->ops->reset(dev);
    dev->state = DEV_IDLE;
}
